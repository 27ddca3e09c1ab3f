#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qvlab/assignment.hpp"

using namespace qvlab;

TEST(Assignment, EmptyProblemCostsNothing) {
  const std::vector<double> cost;
  EXPECT_EQ(assignment::exhaustive(cost, 0).cost, 0.0);
  EXPECT_EQ(assignment::hungarian(cost, 0).cost, 0.0);
}

TEST(Assignment, KnownThreeByThree) {
  // Optimum picks (0,1), (1,0), (2,2): 1 + 2 + 2 = 5.
  const std::vector<double> cost{4, 1, 3, 2, 0, 5, 3, 2, 2};
  const auto ex = assignment::exhaustive(cost, 3);
  const auto hu = assignment::hungarian(cost, 3);
  EXPECT_DOUBLE_EQ(ex.cost, 5.0);
  EXPECT_DOUBLE_EQ(hu.cost, 5.0);
  EXPECT_EQ(ex.column_of_row, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(Assignment, ResultIsAPermutation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (std::size_t n : {1u, 4u, 9u, 15u}) {
    std::vector<double> cost(n * n);
    for (auto& c : cost) c = d(rng);
    const auto r = assignment::solve(cost, n);
    std::vector<bool> seen(n, false);
    for (auto c : r.column_of_row) {
      ASSERT_LT(c, n);
      EXPECT_FALSE(seen[c]);
      seen[c] = true;
    }
  }
}

TEST(Assignment, HungarianMatchesExhaustiveOnRandomMatrices) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-3.0, 7.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 7;
    std::vector<double> cost(n * n);
    for (auto& c : cost) c = d(rng);
    const double ex = assignment::exhaustive(cost, n).cost;
    const double hu = assignment::hungarian(cost, n).cost;
    EXPECT_NEAR(hu, ex, 1e-12 * (1.0 + std::abs(ex)));
  }
}

TEST(Assignment, SolveDispatchesAboveExhaustiveLimit) {
  const std::size_t n = assignment::kExhaustiveLimit + 4;
  std::vector<double> cost(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) cost[i * n + (n - 1 - i)] = 0.0;
  const auto r = assignment::solve(cost, n);
  EXPECT_EQ(r.cost, 0.0);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(r.column_of_row[i], n - 1 - i);
}
