#include "cli.hpp"

int main(int argc, char** argv) { return qvlab::cli::run(argc, argv); }
