#include <iostream>

#include "acceptance/criteria.hpp"

int main() { return qvlab::acceptance::run_all(std::cout) ? 0 : 1; }
