#pragma once

// Grid-resolution branch-set detection for continuous Q-valued functions:
// sigma(x) = card spt u(x) is sampled on a uniform grid and the points where
// sigma differs from a neighbour are flagged as the discontinuity set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <vector>

#include "qvlab/error.hpp"
#include "qvlab/func1d.hpp"
#include "qvlab/qspace.hpp"
#include "qvlab/regression.hpp"

namespace qvlab {

struct BranchScan {
  std::vector<double> grid;
  std::vector<int> sigma;
  std::vector<bool> flagged;  // sigma discontinuous at grid resolution
  double tol = 0.0;
  std::size_t q = 0;

  double lo() const { return grid.front(); }
  double hi() const { return grid.back(); }
  double spacing() const { return (hi() - lo()) / static_cast<double>(grid.size() - 1); }
  std::size_t flagged_count() const { return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), true)); }

  /// Grid points where u is single-valued (sigma == 1).
  std::vector<double> equality_set() const {
    std::vector<double> out;
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (sigma[k] == 1) out.push_back(grid[k]);
    return out;
  }
  std::vector<double> flagged_points() const {
    std::vector<double> out;
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (flagged[k]) out.push_back(grid[k]);
    return out;
  }
};

/// 1e-9 times the range of all branch values (1e-9 for constant functions).
inline double default_branch_tolerance(const PiecewiseAffineQ& u) {
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  for (std::size_t k = 0; k < u.breakpoints().size(); ++k)
    for (double y : u.values_at(k)) {
      mn = std::min(mn, y);
      mx = std::max(mx, y);
    }
  const double range = mx - mn;
  return 1e-9 * (range > 0.0 ? range : 1.0);
}

/// Scans any callable x -> QPoint on a uniform grid of [lo, hi].
template <class Fn>
BranchScan scan_function(Fn&& f, double lo, double hi, std::size_t grid_size, double tol) {
  if (grid_size < 3) throw DomainError("scan: grid_size must be >= 3");
  if (tol < 0.0) throw DomainError("scan: tol must be nonnegative");
  if (!(lo < hi)) throw EmptyIntervalError("scan: empty domain");
  BranchScan s;
  s.tol = tol;
  s.grid.resize(grid_size);
  s.sigma.resize(grid_size);
  const double last = static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k < grid_size; ++k) {
    s.grid[k] = k + 1 == grid_size ? hi : lo + (hi - lo) * (static_cast<double>(k) / last);
    const QPoint p = f(s.grid[k]);
    s.q = p.q();
    s.sigma[k] = static_cast<int>(support_size(p, tol));
  }
  s.flagged.assign(grid_size, false);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const bool left = k > 0 && s.sigma[k - 1] != s.sigma[k];
    const bool right = k + 1 < grid_size && s.sigma[k + 1] != s.sigma[k];
    s.flagged[k] = left || right;
  }
  return s;
}

inline BranchScan scan(const PiecewiseAffineQ& u, std::size_t grid_size, double tol) {
  return scan_function([&u](double x) { return u.eval(x); }, u.lo(), u.hi(), grid_size, tol);
}

inline BranchScan scan(const PiecewiseAffineQ& u, std::size_t grid_size) {
  return scan(u, grid_size, default_branch_tolerance(u));
}

struct DimensionReport {
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  LinearFit fit;  // log N against log(1/eps)
  double dimension() const { return fit.slope; }
};

/// Box-counting dimension of the flagged set: slope of log N(eps) against
/// log(1/eps), boxes anchored at the left end of the domain.
inline DimensionReport box_dimension(const BranchScan& s, std::vector<double> scales) {
  if (scales.size() < 3) throw DomainError("box_dimension: need at least 3 scales");
  std::sort(scales.begin(), scales.end(), std::greater<>());
  if (scales.front() / scales.back() < 100.0) throw DomainError("box_dimension: scales must span two decades");
  if (scales.back() < s.spacing() * (1.0 - 1e-12)) throw DomainError("box_dimension: scale below grid spacing");
  const auto pts = s.flagged_points();
  if (pts.empty()) throw UndefinedDimensionError("box_dimension: no flagged points");
  DimensionReport rep;
  std::vector<double> lx, ly;
  const double len = s.hi() - s.lo();
  for (double eps : scales) {
    const auto boxes = static_cast<long long>(std::ceil(len / eps - 1e-9));
    std::set<long long> occupied;
    for (double x : pts) {
      auto idx = static_cast<long long>(std::floor((x - s.lo()) / eps + 1e-9));
      occupied.insert(std::clamp<long long>(idx, 0, std::max<long long>(boxes - 1, 0)));
    }
    rep.scales.push_back(eps);
    rep.counts.push_back(occupied.size());
    lx.push_back(std::log(1.0 / eps));
    ly.push_back(std::log(static_cast<double>(occupied.size())));
  }
  rep.fit = least_squares(lx, ly);
  return rep;
}

/// Lebesgue measure of the union of closed eps-balls around flagged points,
/// clipped to the domain.
inline double measure_at_scale(const BranchScan& s, double eps) {
  if (eps < s.spacing() * (1.0 - 1e-12)) throw DomainError("measure_at_scale: eps below grid spacing");
  double total = 0.0, cur_a = 0.0, cur_b = 0.0;
  bool open = false;
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    if (!s.flagged[k]) continue;
    const double a = std::max(s.lo(), s.grid[k] - eps), b = std::min(s.hi(), s.grid[k] + eps);
    if (open && a <= cur_b) {
      cur_b = std::max(cur_b, b);
    } else {
      if (open) total += cur_b - cur_a;
      cur_a = a;
      cur_b = b;
      open = true;
    }
  }
  if (open) total += cur_b - cur_a;
  return total;
}

}  // namespace qvlab
