#pragma once

// Codimension-one Q-valued functions on an interval, stored as Q sorted
// piecewise-affine branches over a shared breakpoint grid. Energies are
// computed segment by segment in closed form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvlab/error.hpp"
#include "qvlab/qspace.hpp"

namespace qvlab {

class PiecewiseAffineQ {
 public:
  PiecewiseAffineQ() = default;

  /// `values` is row-major: breakpoint k holds values[k*q .. k*q+q), ascending.
  PiecewiseAffineQ(std::vector<double> breakpoints, std::size_t q, std::vector<double> values)
      : x_(std::move(breakpoints)), q_(q), v_(std::move(values)) {
    if (q_ == 0) throw DimensionError("PiecewiseAffineQ: Q must be positive");
    if (x_.size() < 2) throw DomainError("PiecewiseAffineQ: need at least two breakpoints");
    if (v_.size() != x_.size() * q_) throw DimensionError("PiecewiseAffineQ: values size mismatch");
    for (std::size_t k = 0; k < x_.size(); ++k) {
      if (!std::isfinite(x_[k])) throw DomainError("PiecewiseAffineQ: non-finite breakpoint");
      if (k > 0 && !(x_[k] > x_[k - 1]))
        throw DomainError("PiecewiseAffineQ: breakpoints must be strictly increasing");
      for (std::size_t i = 0; i < q_; ++i) {
        const double y = v_[k * q_ + i];
        if (!std::isfinite(y)) throw DomainError("PiecewiseAffineQ: non-finite value");
        if (i > 0 && y < v_[k * q_ + i - 1])
          throw DomainError("PiecewiseAffineQ: branch values not sorted at x = " + std::to_string(x_[k]));
      }
    }
    prefix_.assign(x_.size(), 0.0);
    for (std::size_t s = 0; s + 1 < x_.size(); ++s)
      prefix_[s + 1] = prefix_[s] + density(s) * (x_[s + 1] - x_[s]);
  }

  /// Branch-major construction; each inner vector is one branch sampled at `breakpoints`.
  static PiecewiseAffineQ from_branches(std::vector<double> breakpoints,
                                        const std::vector<std::vector<double>>& branches) {
    const std::size_t q = branches.size();
    std::vector<double> v(breakpoints.size() * q);
    for (std::size_t i = 0; i < q; ++i) {
      if (branches[i].size() != breakpoints.size())
        throw DimensionError("PiecewiseAffineQ::from_branches: branch length mismatch");
      for (std::size_t k = 0; k < breakpoints.size(); ++k) v[k * q + i] = branches[i][k];
    }
    return PiecewiseAffineQ(std::move(breakpoints), q, std::move(v));
  }

  std::size_t q() const { return q_; }
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  std::span<const double> breakpoints() const { return x_; }
  std::size_t segment_count() const { return x_.size() - 1; }
  double value(std::size_t k, std::size_t branch) const { return v_[k * q_ + branch]; }
  std::span<const double> values_at(std::size_t k) const { return {v_.data() + k * q_, q_}; }

  double slope(std::size_t segment, std::size_t branch) const {
    return (value(segment + 1, branch) - value(segment, branch)) / (x_[segment + 1] - x_[segment]);
  }

  /// |apAu|^2 on a segment: the sum of squared branch slopes.
  double density(std::size_t segment) const {
    double s = 0.0;
    for (std::size_t i = 0; i < q_; ++i) {
      const double d = slope(segment, i);
      s += d * d;
    }
    return s;
  }

  bool contains(double x) const { return x >= lo() && x <= hi(); }

  /// Index of the segment containing x (the last one for x = hi).
  std::size_t segment_of(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t s = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(s, segment_count() - 1);
  }

  /// Sorted branch values at x.
  std::vector<double> branch_values(double x) const {
    if (!contains(x)) throw DomainError("eval: x = " + std::to_string(x) + " outside domain");
    const std::size_t s = segment_of(x);
    std::vector<double> out(q_);
    if (x == x_[s]) {
      for (std::size_t i = 0; i < q_; ++i) out[i] = value(s, i);
      return out;
    }
    if (x == x_[s + 1]) {
      for (std::size_t i = 0; i < q_; ++i) out[i] = value(s + 1, i);
      return out;
    }
    const double t = (x - x_[s]) / (x_[s + 1] - x_[s]);
    for (std::size_t i = 0; i < q_; ++i) out[i] = value(s, i) + t * (value(s + 1, i) - value(s, i));
    return out;
  }

  QPoint eval(double x) const { return QPoint::reals(branch_values(x)); }

  /// Integral of the density over [lo, x]; exact for affine branches.
  double cumulative_energy(double x) const {
    const std::size_t s = segment_of(x);
    return prefix_[s] + density(s) * (x - x_[s]);
  }

 private:
  std::vector<double> x_;
  std::size_t q_ = 0;
  std::vector<double> v_;
  std::vector<double> prefix_;
};

/// Piecewise-constant positive weight on [breakpoints.front(), breakpoints.back()].
struct PiecewiseConstantWeight {
  std::vector<double> breakpoints;
  std::vector<double> values;  // one per piece

  void validate() const {
    if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
      throw DomainError("weight: need n+1 breakpoints for n pieces");
    for (std::size_t k = 1; k < breakpoints.size(); ++k)
      if (!(breakpoints[k] > breakpoints[k - 1])) throw DomainError("weight: breakpoints must increase");
    for (double w : values)
      if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weight: values must be positive");
  }
  double max() const { return *std::max_element(values.begin(), values.end()); }
  double min() const { return *std::min_element(values.begin(), values.end()); }
};

namespace detail {

inline void require_subinterval(const PiecewiseAffineQ& u, double a, double b) {
  if (!(a < b)) throw EmptyIntervalError("dirichlet_energy: empty interval [a, b]");
  if (a < u.lo() || b > u.hi()) throw DomainError("dirichlet_energy: interval leaves the domain");
}

}  // namespace detail

/// Dir(u; (a, b)) = sum_i integral of branch_i'^2, exact.
inline double dirichlet_energy(const PiecewiseAffineQ& u, double a, double b) {
  detail::require_subinterval(u, a, b);
  const auto x = u.breakpoints();
  const std::size_t sa = u.segment_of(a);
  const std::size_t sb = u.segment_of(b);
  if (sa == sb) return u.density(sa) * (b - a);
  double e = u.density(sa) * (x[sa + 1] - a);
  for (std::size_t s = sa + 1; s < sb; ++s) e += u.density(s) * (x[s + 1] - x[s]);
  return e + u.density(sb) * (b - x[sb]);
}

inline double dirichlet_energy(const PiecewiseAffineQ& u) { return dirichlet_energy(u, u.lo(), u.hi()); }

/// Weighted energy J = integral of w |apAu|^2 over (a, b), exact for
/// piecewise-constant w. The weight must cover [a, b].
inline double dirichlet_energy(const PiecewiseAffineQ& u, double a, double b, const PiecewiseConstantWeight& w) {
  detail::require_subinterval(u, a, b);
  w.validate();
  if (a < w.breakpoints.front() || b > w.breakpoints.back())
    throw DomainError("dirichlet_energy: weight does not cover the interval");
  std::vector<double> cuts{a, b};
  for (double t : u.breakpoints())
    if (t > a && t < b) cuts.push_back(t);
  for (double t : w.breakpoints)
    if (t > a && t < b) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double e = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const std::size_t piece = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(w.breakpoints.begin(), w.breakpoints.end(), mid) -
                                 w.breakpoints.begin()) - 1,
        w.values.size() - 1);
    e += w.values[piece] * u.density(u.segment_of(mid)) * (cuts[k + 1] - cuts[k]);
  }
  return e;
}

namespace detail {

inline std::vector<double> sorted_reals(const QPoint& p, const char* who) {
  if (p.n() != 1) throw UnsupportedCodimensionError(std::string(who) + ": only codimension one (n = 1)");
  std::vector<double> v(p.coords().begin(), p.coords().end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

/// The Dirichlet minimizer on (a, b) with the given end values: the i-th
/// smallest value at a joined affinely to the i-th smallest value at b.
inline PiecewiseAffineQ exact_minimizer(const QPoint& boundary_a, const QPoint& boundary_b, double a, double b) {
  const auto va = detail::sorted_reals(boundary_a, "exact_minimizer");
  const auto vb = detail::sorted_reals(boundary_b, "exact_minimizer");
  if (va.size() != vb.size()) throw DimensionError("exact_minimizer: boundary tuples differ in Q");
  if (!(a < b)) throw EmptyIntervalError("exact_minimizer: need a < b");
  std::vector<double> v(va);
  v.insert(v.end(), vb.begin(), vb.end());
  return PiecewiseAffineQ({a, b}, va.size(), std::move(v));
}

/// Closed form of the minimal energy: G^2(u(b), u(a)) / (b - a).
inline double minimal_energy(const QPoint& boundary_a, const QPoint& boundary_b, double a, double b) {
  if (!(a < b)) throw EmptyIntervalError("minimal_energy: need a < b");
  return metric_g_squared(boundary_a, boundary_b) / (b - a);
}

/// Minimizer of the weighted energy with piecewise-constant weight: on each
/// sorted branch the slope is proportional to 1/w.
inline PiecewiseAffineQ weighted_minimizer(const QPoint& boundary_a, const QPoint& boundary_b, double a, double b,
                                           const PiecewiseConstantWeight& w) {
  const auto va = detail::sorted_reals(boundary_a, "weighted_minimizer");
  const auto vb = detail::sorted_reals(boundary_b, "weighted_minimizer");
  if (va.size() != vb.size()) throw DimensionError("weighted_minimizer: boundary tuples differ in Q");
  if (!(a < b)) throw EmptyIntervalError("weighted_minimizer: need a < b");
  w.validate();
  if (a < w.breakpoints.front() || b > w.breakpoints.back())
    throw DomainError("weighted_minimizer: weight does not cover the interval");
  std::vector<double> xs{a};
  for (double t : w.breakpoints)
    if (t > a && t < b) xs.push_back(t);
  xs.push_back(b);
  // F(x) = integral_a^x 1/w normalised to F(b) = 1.
  std::vector<double> f(xs.size(), 0.0);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double mid = 0.5 * (xs[k] + xs[k + 1]);
    const std::size_t piece = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(w.breakpoints.begin(), w.breakpoints.end(), mid) -
                                 w.breakpoints.begin()) - 1,
        w.values.size() - 1);
    f[k + 1] = f[k] + (xs[k + 1] - xs[k]) / w.values[piece];
  }
  const double total = f.back();
  const std::size_t q = va.size();
  std::vector<double> v(xs.size() * q);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double t = k + 1 == xs.size() ? 1.0 : f[k] / total;
    for (std::size_t i = 0; i < q; ++i) v[k * q + i] = k + 1 == xs.size() ? vb[i] : va[i] + t * (vb[i] - va[i]);
  }
  return PiecewiseAffineQ(std::move(xs), q, std::move(v));
}

/// Lip(u) with respect to G: the largest per-segment rate (sum of squared slopes)^{1/2}.
inline double lipschitz_constant(const PiecewiseAffineQ& u) {
  double m = 0.0;
  for (std::size_t s = 0; s < u.segment_count(); ++s) m = std::max(m, std::sqrt(u.density(s)));
  return m;
}

inline double branch_lipschitz_constant(const PiecewiseAffineQ& u, std::size_t branch) {
  double m = 0.0;
  for (std::size_t s = 0; s < u.segment_count(); ++s) m = std::max(m, std::abs(u.slope(s, branch)));
  return m;
}

/// x -> u(lo + (x - lo) / lambda) on [lo, lo + lambda (hi - lo)].
inline PiecewiseAffineQ rescale_domain(const PiecewiseAffineQ& u, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("rescale_domain: lambda must be positive");
  std::vector<double> xs(u.breakpoints().begin(), u.breakpoints().end());
  for (double& x : xs) x = u.lo() + lambda * (x - u.lo());
  std::vector<double> v;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    auto row = u.values_at(k);
    v.insert(v.end(), row.begin(), row.end());
  }
  return PiecewiseAffineQ(std::move(xs), u.q(), std::move(v));
}

/// Adds c to every branch value.
inline PiecewiseAffineQ shift_values(const PiecewiseAffineQ& u, double c) {
  std::vector<double> xs(u.breakpoints().begin(), u.breakpoints().end());
  std::vector<double> v;
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (double y : u.values_at(k)) v.push_back(y + c);
  return PiecewiseAffineQ(std::move(xs), u.q(), std::move(v));
}

}  // namespace qvlab
