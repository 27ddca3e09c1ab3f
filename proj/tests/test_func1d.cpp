#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "acceptance/oracles.hpp"
#include "qvlab/constructions.hpp"
#include "qvlab/func1d.hpp"

using namespace qvlab;

TEST(PiecewiseAffineQ, ValidatesInput) {
  EXPECT_THROW(PiecewiseAffineQ({0.0}, 1, {0.0}), DomainError);
  EXPECT_THROW(PiecewiseAffineQ({0.0, 0.0}, 1, {0.0, 1.0}), DomainError);
  EXPECT_THROW(PiecewiseAffineQ({0.0, 1.0}, 2, {1.0, 0.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(PiecewiseAffineQ({0.0, 1.0}, 2, {0.0, 0.0}), DimensionError);
  EXPECT_THROW(PiecewiseAffineQ({0.0, 1.0}, 1, {0.0, INFINITY}), DomainError);
  EXPECT_NO_THROW(PiecewiseAffineQ({0.0, 1.0}, 2, {0.0, 0.0, 1.0, 1.0}));
}

TEST(PiecewiseAffineQ, FromBranchesTransposes) {
  const auto u = PiecewiseAffineQ::from_branches({0.0, 1.0, 2.0}, {{0, 1, 1}, {2, 2, 3}});
  EXPECT_EQ(u.q(), 2u);
  EXPECT_EQ(u.value(1, 0), 1.0);
  EXPECT_EQ(u.value(2, 1), 3.0);
}

TEST(Eval, AffineMidpoint) {
  const PiecewiseAffineQ u({0.0, 1.0}, 2, {0.0, 0.0, 1.0, 1.0});
  EXPECT_EQ(u.eval(0.5), QPoint::reals({0.5, 0.5}));
}

TEST(Eval, DiamondMidpoint) {
  const auto u = construct::make_diamond(0.0, 1.0, 0.0);
  EXPECT_EQ(u.eval(0.5), QPoint::reals({0.0, 0.5}));
}

TEST(Eval, BreakpointsReturnStoredValues) {
  const auto u = construct::sin_sampled(33);
  for (std::size_t k = 0; k < u.breakpoints().size(); ++k) {
    const auto v = u.branch_values(u.breakpoints()[k]);
    EXPECT_EQ(v[0], u.value(k, 0));
    EXPECT_EQ(v[1], u.value(k, 1));
  }
}

TEST(Eval, OutsideDomainThrows) {
  const auto u = construct::make_losange(0.0, 1.0);
  EXPECT_THROW(u.eval(-1e-9), DomainError);
  EXPECT_THROW(u.eval(1.5), DomainError);
}

TEST(DirichletEnergy, DoubleLine) {
  const auto u = construct::make_double_line(0.0, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(dirichlet_energy(u, 0.25, 0.75), 1.0);
  EXPECT_DOUBLE_EQ(dirichlet_energy(u), 2.0);
}

TEST(DirichletEnergy, DiamondAndLosange) {
  EXPECT_NEAR(dirichlet_energy(construct::make_diamond(1.0 / 3.0, 2.0 / 3.0, 0.0)), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(dirichlet_energy(construct::make_losange(0.0, 1.0)), 2.0);
}

TEST(DirichletEnergy, EmptyOrOutsideIntervalThrows) {
  const auto u = construct::make_losange(0.0, 1.0);
  EXPECT_THROW(dirichlet_energy(u, 0.5, 0.5), EmptyIntervalError);
  EXPECT_THROW(dirichlet_energy(u, 0.7, 0.2), EmptyIntervalError);
  EXPECT_THROW(dirichlet_energy(u, -0.1, 0.2), DomainError);
}

TEST(DirichletEnergy, AdditiveOverAdjacentIntervals) {
  const auto u = construct::cantor_level({4, construct::Flavor::diamond, {}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    double p[3] = {d(rng), d(rng), d(rng)};
    std::sort(p, p + 3);
    if (!(p[0] < p[1] && p[1] < p[2])) continue;
    const double whole = dirichlet_energy(u, p[0], p[2]);
    EXPECT_NEAR(dirichlet_energy(u, p[0], p[1]) + dirichlet_energy(u, p[1], p[2]), whole, 1e-14 * (1.0 + whole));
  }
}

TEST(DirichletEnergy, MatchesQuadratureOfSquaredSlopes) {
  const auto u = construct::pluri_diamond_demo();
  const double quad = oracle::simpson(
      [&](double x) {
        const double h = 1e-7;
        const auto l = u.branch_values(std::max(0.0, x - h)), r = u.branch_values(std::min(1.0, x + h));
        const double w = std::min(1.0, x + h) - std::max(0.0, x - h);
        double s = 0.0;
        for (std::size_t i = 0; i < 2; ++i) s += (r[i] - l[i]) * (r[i] - l[i]) / (w * w);
        return s;
      },
      0.0, 1.0, 20000);
  EXPECT_NEAR(dirichlet_energy(u), quad, 1e-3);
}

TEST(DirichletEnergy, WeightedConstantWeightScales) {
  const auto u = construct::make_losange(0.0, 1.0);
  const PiecewiseConstantWeight w{{0.0, 1.0}, {3.0}};
  EXPECT_DOUBLE_EQ(dirichlet_energy(u, 0.0, 1.0, w), 6.0);
  const PiecewiseConstantWeight split{{0.0, 0.25, 1.0}, {1.0, 5.0}};
  EXPECT_DOUBLE_EQ(dirichlet_energy(u, 0.0, 1.0, split), 2.0 * 0.25 + 10.0 * 0.75);
  EXPECT_THROW(dirichlet_energy(u, 0.0, 1.0, PiecewiseConstantWeight{{0.0, 1.0}, {0.0}}), DomainError);
}

TEST(ExactMinimizer, EqualBoundaryGivesConstant) {
  const auto m = exact_minimizer(QPoint::reals({1, 3}), QPoint::reals({3, 1}), 0.0, 2.0);
  EXPECT_EQ(dirichlet_energy(m), 0.0);
}

TEST(ExactMinimizer, SplittingPair) {
  const auto m = exact_minimizer(QPoint::reals({0, 0}), QPoint::reals({0, 1}), 0.0, 1.0);
  EXPECT_EQ(m.value(1, 0), 0.0);
  EXPECT_EQ(m.value(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(dirichlet_energy(m), 1.0);
}

TEST(ExactMinimizer, Errors) {
  EXPECT_THROW(exact_minimizer(QPoint(1, 2, {0, 0}), QPoint(1, 2, {1, 1}), 0.0, 1.0), UnsupportedCodimensionError);
  EXPECT_THROW(exact_minimizer(QPoint::reals({0}), QPoint::reals({1}), 1.0, 1.0), EmptyIntervalError);
  EXPECT_THROW(exact_minimizer(QPoint::reals({0}), QPoint::reals({1, 2}), 0.0, 1.0), DimensionError);
}

TEST(ExactMinimizer, EnergyIsGSquaredOverLength) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t q = 1 + t % 6;
    std::vector<double> va(q), vb(q);
    for (auto& x : va) x = d(rng);
    for (auto& x : vb) x = d(rng);
    const double a = d(rng), b = a + 0.01 + std::abs(d(rng));
    const auto m = exact_minimizer(QPoint::reals(va), QPoint::reals(vb), a, b);
    const double g = oracle::brute_force_g(va, vb, q, 1);
    const double want = g * g / (b - a);
    EXPECT_NEAR(dirichlet_energy(m), want, 1e-12 * std::max(1.0, want));
    EXPECT_NEAR(minimal_energy(QPoint::reals(va), QPoint::reals(vb), a, b), want, 1e-12 * std::max(1.0, want));
  }
}

TEST(ExactMinimizer, BeatsRandomCompetitors) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t q = 1 + t % 4;
    std::vector<double> va(q), vb(q);
    for (auto& x : va) x = d(rng);
    for (auto& x : vb) x = d(rng);
    const double e = minimal_energy(QPoint::reals(va), QPoint::reals(vb), 0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      const auto c = oracle::random_competitor(rng, va, vb, 0.0, 1.0, 1 + k % 6, 0.05 * (k % 4));
      EXPECT_LE(e, c.energy() * (1.0 + 1e-12));
    }
  }
}

TEST(WeightedMinimizer, SlopeInverseToWeight) {
  const PiecewiseConstantWeight w{{0.0, 0.5, 1.0}, {1.0, 4.0}};
  const auto m = weighted_minimizer(QPoint::reals({0.0}), QPoint::reals({1.0}), 0.0, 1.0, w);
  // Flux w u' is constant: u' = 8/5 on the light half, 2/5 on the heavy half.
  EXPECT_NEAR(m.branch_values(0.5)[0], 0.8, 1e-14);
  EXPECT_NEAR(dirichlet_energy(m, 0.0, 1.0, w), 1.6, 1e-13);
  const auto straight = exact_minimizer(QPoint::reals({0.0}), QPoint::reals({1.0}), 0.0, 1.0);
  EXPECT_LT(dirichlet_energy(m, 0.0, 1.0, w), dirichlet_energy(straight, 0.0, 1.0, w));
}

TEST(Lipschitz, DiamondBounds) {
  const auto u = construct::make_diamond(0.0, 1.0, 0.0);
  EXPECT_LE(lipschitz_constant(u), std::sqrt(2.0));
  EXPECT_EQ(branch_lipschitz_constant(u, 0), 1.0);
  EXPECT_EQ(branch_lipschitz_constant(u, 1), 1.0);
}

TEST(Rescale, EnergyDividesByLambda) {
  const auto u = construct::pluri_diamond_demo();
  for (double lambda : {0.25, 2.0, 7.5}) {
    const auto v = rescale_domain(u, lambda);
    EXPECT_NEAR(dirichlet_energy(v), dirichlet_energy(u) / lambda, 1e-13);
  }
  EXPECT_THROW(rescale_domain(u, 0.0), DomainError);
}

TEST(Shift, LeavesEnergyUnchanged) {
  const auto u = construct::pluri_losange_demo();
  EXPECT_NEAR(dirichlet_energy(shift_values(u, 3.0)), dirichlet_energy(u), 1e-14);
}
