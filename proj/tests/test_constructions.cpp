#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "acceptance/oracles.hpp"
#include "qvlab/audit.hpp"
#include "qvlab/constructions.hpp"

using namespace qvlab;
using namespace qvlab::construct;

namespace {

void expect_sorted_and_finite(const PiecewiseAffineQ& u) {
  for (std::size_t k = 0; k < u.breakpoints().size(); ++k) {
    const auto v = u.values_at(k);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_TRUE(std::isfinite(v[i]));
      if (i > 0) {
        EXPECT_LE(v[i - 1], v[i]);
      }
    }
  }
}

}  // namespace

TEST(Diamond, VertexValues) {
  const auto u = make_diamond(0.0, 1.0, 0.0);
  EXPECT_EQ(u.eval(0.0), QPoint::reals({0, 0}));
  EXPECT_EQ(u.eval(1.0), QPoint::reals({0.5, 0.5}));
  EXPECT_EQ(u.eval(0.5), QPoint::reals({0, 0.5}));
  EXPECT_DOUBLE_EQ(dirichlet_energy(u), 1.0);
  EXPECT_LE(lipschitz_constant(u), std::numbers::sqrt2);
}

TEST(Diamond, HeightOffset) {
  const auto u = make_diamond(2.0, 4.0, -1.0);
  EXPECT_EQ(u.eval(2.0), QPoint::reals({-1, -1}));
  EXPECT_EQ(u.eval(4.0), QPoint::reals({0, 0}));
  EXPECT_THROW(make_diamond(1.0, 1.0, 0.0), DomainError);
}

TEST(Losange, VertexValues) {
  const auto u = make_losange(0.0, 1.0);
  EXPECT_EQ(u.eval(0.5), QPoint::reals({-0.5, 0.5}));
  EXPECT_EQ(u.eval(0.0), QPoint::reals({0, 0}));
  EXPECT_EQ(u.eval(1.0), QPoint::reals({0, 0}));
  EXPECT_DOUBLE_EQ(dirichlet_energy(u), 2.0);
  EXPECT_THROW(make_losange(2.0, 1.0), DomainError);
}

TEST(PluriDiamond, ContinuousAnchoredAndLipschitz) {
  const auto u = pluri_diamond_demo();
  expect_sorted_and_finite(u);
  EXPECT_EQ(u.branch_values(0.2)[0], 0.0);
  EXPECT_LE(lipschitz_constant(u), std::numbers::sqrt2 + 1e-15);
  EXPECT_NEAR(branch_lipschitz_constant(u, 0), 1.0, 1e-12);
  EXPECT_NEAR(branch_lipschitz_constant(u, 1), 1.0, 1e-12);
}

TEST(PluriDiamond, RejectsGapsInPartition) {
  EXPECT_THROW(make_pluri_diamond({{{0.0, 0.4}, true}, {{0.5, 1.0}, false}}, 0.0), DomainError);
  EXPECT_THROW(make_pluri_losange({}), DomainError);
}

TEST(CantorLevel, LevelZeroRejected) {
  EXPECT_THROW(cantor_level({0, Flavor::diamond, {}}), DomainError);
}

TEST(CantorLevel, DiamondLevelOne) {
  const auto u = cantor_level({1, Flavor::diamond, {}});
  EXPECT_EQ(u.eval(1.0 / 3.0), QPoint::reals({0, 0}));
  EXPECT_NEAR(branch_gap(u, 0.5), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(branch_gap(u, 0.2), 0.0);
  EXPECT_EQ(branch_gap(u, 0.8), 0.0);
  // Slope-one double lines outside the diamond.
  EXPECT_NEAR(u.branch_values(0.0)[0], -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(u.branch_values(1.0)[0], 1.0 / 6.0 + 1.0 / 3.0, 1e-15);
}

TEST(CantorLevel, LosangeLevelTwo) {
  const auto u = cantor_level({2, Flavor::losange, {}});
  const std::vector<std::pair<double, double>> blocks{{1.0 / 9, 2.0 / 9}, {1.0 / 3, 2.0 / 3}, {7.0 / 9, 8.0 / 9}};
  for (const auto& [a, b] : blocks) EXPECT_NEAR(branch_gap(u, 0.5 * (a + b)), b - a, 1e-15);
  for (double x : {0.0, 0.05, 0.25, 0.7, 0.95, 1.0}) EXPECT_EQ(u.eval(x), QPoint::reals({0, 0}));
  expect_sorted_and_finite(u);
}

TEST(CantorLevel, DiamondBranchesAreOneLipschitz) {
  for (int level = 1; level <= 6; ++level) {
    const auto u = cantor_level({level, Flavor::diamond, {}});
    EXPECT_NEAR(branch_lipschitz_constant(u, 0), 1.0, 1e-12);
    EXPECT_NEAR(branch_lipschitz_constant(u, 1), 1.0, 1e-12);
    expect_sorted_and_finite(u);
  }
}

TEST(CantorLevel, RefinementKeepsGapOffTiAndValuesOnMiddleThird) {
  for (int level = 1; level <= 5; ++level) {
    const auto u = cantor_level({level, Flavor::diamond, {}});
    const auto v = cantor_level({level + 1, Flavor::diamond, {}});
    for (const auto& g : removed_intervals(CantorSchedule::ternary(), level))
      for (double t : {0.1, 0.5, 0.9}) {
        const double x = g.span.a + t * (g.span.b - g.span.a);
        EXPECT_NEAR(branch_gap(u, x), branch_gap(v, x), 1e-14);
      }
    for (double x : {1.0 / 3.0, 0.4, 0.5, 0.6, 2.0 / 3.0}) {
      const auto a = u.branch_values(x), b = v.branch_values(x);
      EXPECT_NEAR(a[0], b[0], 1e-14);
      EXPECT_NEAR(a[1], b[1], 1e-14);
    }
  }
}

TEST(CantorSchedules, RemovedIntervalsAndMeasures) {
  const auto r = removed_intervals(CantorSchedule::ternary(), 2);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].span, (Interval{1.0 / 9, 2.0 / 9}));
  EXPECT_EQ(r[1].span, (Interval{1.0 / 3, 2.0 / 3}));
  EXPECT_EQ(r[1].step, 1);
  const auto t = remaining_intervals(CantorSchedule::ternary(), 3);
  ASSERT_EQ(t.size(), 8u);
  double len = 0.0;
  for (const auto& iv : t) len += iv.b - iv.a;
  EXPECT_NEAR(len, residual_measure(CantorSchedule::ternary(), 3), 1e-15);

  for (int level = 1; level <= 12; ++level) {
    double fat = 0.0;
    for (const auto& iv : remaining_intervals(CantorSchedule::fat(), level)) fat += iv.b - iv.a;
    EXPECT_NEAR(fat, residual_measure(CantorSchedule::fat(), level), 1e-13);
  }
  EXPECT_EQ(limit_measure(CantorSchedule::fat()), 0.5);
  EXPECT_EQ(limit_measure(CantorSchedule::ternary()), 0.0);
  EXPECT_THROW(CantorSchedule::ratio(1.0), DomainError);
  double rho_len = 0.0;
  for (const auto& iv : remaining_intervals(CantorSchedule::ratio(0.5), 4)) rho_len += iv.b - iv.a;
  EXPECT_NEAR(rho_len, residual_measure(CantorSchedule::ratio(0.5), 4), 1e-15);
}

TEST(CantorSchedules, TernaryIndexOracle) {
  const int level = 4;
  const auto t = remaining_intervals(CantorSchedule::ternary(), level);
  const long long n = 81;
  for (long long k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    bool inside = false;
    for (const auto& iv : t) inside = inside || (x >= iv.a - 1e-15 && x <= iv.b + 1e-15);
    EXPECT_EQ(inside, oracle::in_ternary_t(k, level)) << k;
  }
}

TEST(CantorLimit, UniformBoundHoldsAgainstFinerLevels) {
  for (Flavor f : {Flavor::diamond, Flavor::losange}) {
    for (int cap = 1; cap <= 6; ++cap) {
      const auto lim = cantor_limit(f, cap);
      const auto fine = cantor_level({cap + 6, f, {}});
      double worst = 0.0;
      for (int k = 0; k <= 2000; ++k) {
        const double x = k / 2000.0;
        worst = std::max(worst, metric_g(lim.approximant.eval(x), fine.eval(x)));
      }
      EXPECT_LE(worst, lim.uniform_bound * (1.0 + 1e-12)) << to_string(f) << " cap " << cap;
    }
  }
  EXPECT_THROW(cantor_limit(Flavor::diamond, 0), DomainError);
}

TEST(CantorLimit, EqualityOnTAndSeparationOff) {
  const auto lim = cantor_limit(Flavor::diamond, 5);
  for (const auto& iv : remaining_intervals(CantorSchedule::ternary(), 5))
    for (double t : {0.0, 0.5, 1.0}) EXPECT_NEAR(branch_gap(lim.approximant, iv.a + t * (iv.b - iv.a)), 0.0, 1e-14);
  for (const auto& g : removed_intervals(CantorSchedule::ternary(), 5))
    EXPECT_GT(branch_gap(lim.approximant, g.span.center()), 0.0);
}

TEST(PluriLosange, NotQuasiminimal) {
  const auto u = pluri_losange_demo();
  EXPECT_TRUE(std::isinf(quasi_k_ratio(u, {{0.1, 0.3}}).supremum));
  EXPECT_TRUE(std::isinf(quasi_k_ratio(u, interval_family(u, 4)).supremum));
}

TEST(SinExample, OmegaClosedForm) {
  EXPECT_NEAR(omega_sin(0.1), 3.3400e-3, 1e-7);
  EXPECT_NEAR(omega_sin(0.1), 0.1 * 0.1 / (std::sin(0.1) * std::sin(0.1)) - 1.0, 1e-16);
  EXPECT_THROW(omega_sin(0.0), DomainError);
}

TEST(SinExample, SineBranchEnergyMatchesQuadrature) {
  for (double r : {0.05, 0.2, 0.5, 0.7}) {
    const double quad = oracle::simpson([](double s) { return std::cos(s) * std::cos(s); }, -r, r);
    EXPECT_NEAR(sin_branch_dir(0.0, r), quad, 1e-10);
  }
  const double x = 0.3, r = 0.2;
  const double quad = oracle::simpson([](double s) { return std::cos(s) * std::cos(s); }, x - r, x + r);
  EXPECT_NEAR(sin_branch_dir(x, r), quad, 1e-10);
  EXPECT_NEAR(sin_dir_u(x, r), 2.0 * r + quad, 1e-10);
}

TEST(SinExample, IdentityComparisonFormula) {
  const double x = -0.2, r = 0.3;
  const double slope = (std::sin(x + r) - std::sin(x - r)) / (2.0 * r);
  EXPECT_NEAR(sin_dir_v_identity(x, r), 2.0 * r + slope * slope * 2.0 * r, 1e-14);
  EXPECT_LE(sin_dir_v_sorted(0.0, r), sin_dir_v_identity(0.0, r));
  EXPECT_NEAR(sin_dir_v_identity(0.0, r) - sin_dir_v_sorted(0.0, r), (r - std::sin(r)) * (r - std::sin(r)) / r, 1e-14);
  EXPECT_THROW(sin_dir_u(0.7, 0.2), DomainError);
}

TEST(SinExample, WInequality) {
  for (int i = 0; i <= 40; ++i)
    for (int j = 1; j <= 40; ++j) {
      const double x = -kSinHalfWidth + 2.0 * kSinHalfWidth * i / 40.0, r = j / 40.0;
      const double s = std::sin(r);
      EXPECT_LE(sin_w(x, r) * s * s / (r * r), 1.0 + 1e-12);
    }
  EXPECT_NEAR(sin_w(kSinHalfWidth, 0.5), 0.25 / (std::sin(0.5) * std::sin(0.5)), 1e-14);
}

TEST(SinExample, Sampled) {
  const auto u = sin_sampled(101);
  EXPECT_EQ(u.eval(0.0), QPoint::reals({0, 0}));
  const auto v = u.branch_values(u.breakpoints()[70]);
  const double x = u.breakpoints()[70];
  EXPECT_DOUBLE_EQ(v[0], std::sin(x));
  EXPECT_DOUBLE_EQ(v[1], x);
  EXPECT_THROW(sin_sampled(1), DomainError);
}
