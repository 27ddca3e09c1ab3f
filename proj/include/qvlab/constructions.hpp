#pragma once

// Explicit Q = 2 constructions: diamonds, losanges, their continuous
// concatenations, the Cantor-type refinement sequences built from them, and
// the two-valued sine example with its closed-form energies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qvlab/audit.hpp"
#include "qvlab/error.hpp"
#include "qvlab/func1d.hpp"

namespace qvlab::construct {

/// Graph is the parallelogram [a,h], [(a+b)/2,h], [(a+b)/2,h+(b-a)/2], [b,h+(b-a)/2].
inline PiecewiseAffineQ make_diamond(double a, double b, double h) {
  if (!(a < b)) throw DomainError("make_diamond: need a < b");
  const double m = 0.5 * (a + b), rise = 0.5 * (b - a);
  return PiecewiseAffineQ({a, m, b}, 2, {h, h, h, h + rise, h + rise, h + rise});
}

/// Graph is the parallelogram [a,0], [(a+b)/2,(b-a)/2], [b,0], [(a+b)/2,(a-b)/2].
inline PiecewiseAffineQ make_losange(double a, double b) {
  if (!(a < b)) throw DomainError("make_losange: need a < b");
  const double m = 0.5 * (a + b), half = 0.5 * (b - a);
  return PiecewiseAffineQ({a, m, b}, 2, {0.0, 0.0, -half, half, 0.0, 0.0});
}

/// x -> 2[[x + p]] on [a, b].
inline PiecewiseAffineQ make_double_line(double a, double b, double p) {
  if (!(a < b)) throw DomainError("make_double_line: need a < b");
  return PiecewiseAffineQ({a, b}, 2, {a + p, a + p, b + p, b + p});
}

/// One piece of a partition: a diamond/losange block or a filler (double line
/// for diamonds, 2[[0]] for losanges).
struct Piece {
  Interval span;
  bool block = false;
};

namespace detail {

inline void require_partition(const std::vector<Piece>& pieces) {
  if (pieces.empty()) throw DomainError("pluri construction: empty partition");
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (!(pieces[k].span.a < pieces[k].span.b)) throw DomainError("pluri construction: empty piece");
    if (k > 0 && pieces[k].span.a != pieces[k - 1].span.b)
      throw DomainError("pluri construction: pieces must be contiguous");
  }
}

}  // namespace detail

/// Continuous concatenation of diamonds and slope-one double lines over the
/// partition, shifted so that the lower branch equals `anchor_value` at `anchor`.
inline PiecewiseAffineQ make_pluri_diamond(const std::vector<Piece>& pieces, double anchor, double anchor_value = 0.0) {
  detail::require_partition(pieces);
  std::vector<double> xs{pieces.front().span.a};
  std::vector<double> v{0.0, 0.0};
  double level = 0.0;
  for (const auto& p : pieces) {
    const double len = p.span.b - p.span.a;
    if (p.block) {
      xs.push_back(p.span.center());
      v.insert(v.end(), {level, level + 0.5 * len});
      level += 0.5 * len;
    } else {
      level += len;
    }
    xs.push_back(p.span.b);
    v.insert(v.end(), {level, level});
  }
  PiecewiseAffineQ raw(xs, 2, v);
  const double shift = anchor_value - raw.branch_values(anchor)[0];
  return shift_values(raw, shift);
}

/// Continuous concatenation of losanges and 2[[0]] over the partition.
inline PiecewiseAffineQ make_pluri_losange(const std::vector<Piece>& pieces) {
  detail::require_partition(pieces);
  std::vector<double> xs{pieces.front().span.a};
  std::vector<double> v{0.0, 0.0};
  for (const auto& p : pieces) {
    if (p.block) {
      const double half = p.span.radius();
      xs.push_back(p.span.center());
      v.insert(v.end(), {-half, half});
    }
    xs.push_back(p.span.b);
    v.insert(v.end(), {0.0, 0.0});
  }
  return PiecewiseAffineQ(std::move(xs), 2, std::move(v));
}

enum class Flavor { diamond, losange };

inline std::string to_string(Flavor f) { return f == Flavor::diamond ? "diamond" : "losange"; }

/// How each step removes an open middle interval from every remaining interval.
struct CantorSchedule {
  enum class Kind { ternary, ratio, fat };
  Kind kind = Kind::ternary;
  double removal_ratio = 1.0 / 3.0;  // Kind::ratio: removed fraction of each remaining interval

  static CantorSchedule ternary() { return {}; }
  static CantorSchedule ratio(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("CantorSchedule: removal ratio must lie in (0, 1)");
    return {Kind::ratio, rho};
  }
  /// Step k removes a centred interval of length 4^{-k} from each remaining interval.
  static CantorSchedule fat() { return {Kind::fat, 0.0}; }
};

struct CantorConstruction {
  int level = 1;
  Flavor flavor = Flavor::diamond;
  CantorSchedule schedule;
};

struct RemovedInterval {
  Interval span;
  int step = 0;
};

/// Intervals removed from [0, 1] by steps 1..level, sorted by position.
inline std::vector<RemovedInterval> removed_intervals(const CantorSchedule& sched, int level) {
  if (level < 0) throw DomainError("removed_intervals: negative level");
  std::vector<RemovedInterval> out;
  if (sched.kind == CantorSchedule::Kind::ternary) {
    if (level > 33) throw DomainError("removed_intervals: ternary level too deep for exact arithmetic");
    // Remaining intervals at step k are [l, l + 1] in units of 3^{-k}.
    std::vector<std::uint64_t> left{0};
    std::uint64_t scale = 1;
    for (int k = 1; k <= level; ++k) {
      scale *= 3;
      const double denom = static_cast<double>(scale);
      std::vector<std::uint64_t> next;
      next.reserve(2 * left.size());
      for (std::uint64_t l : left) {
        const std::uint64_t base = 3 * l;
        out.push_back({{static_cast<double>(base + 1) / denom, static_cast<double>(base + 2) / denom}, k});
        next.push_back(base);
        next.push_back(base + 2);
      }
      left = std::move(next);
    }
  } else {
    std::vector<Interval> remaining{{0.0, 1.0}};
    double fat_len = 1.0;
    for (int k = 1; k <= level; ++k) {
      fat_len /= 4.0;
      std::vector<Interval> next;
      next.reserve(2 * remaining.size());
      for (const auto& iv : remaining) {
        const double len = iv.b - iv.a;
        const double cut = sched.kind == CantorSchedule::Kind::fat ? fat_len : sched.removal_ratio * len;
        const double a = iv.a + 0.5 * (len - cut), b = a + cut;
        out.push_back({{a, b}, k});
        next.push_back({iv.a, a});
        next.push_back({b, iv.b});
      }
      remaining = std::move(next);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.span < y.span; });
  return out;
}

/// Components of T_level (the closed set left after `level` steps).
inline std::vector<Interval> remaining_intervals(const CantorSchedule& sched, int level) {
  const auto removed = removed_intervals(sched, level);
  std::vector<Interval> out;
  double left = 0.0;
  for (const auto& r : removed) {
    out.push_back({left, r.span.a});
    left = r.span.b;
  }
  out.push_back({left, 1.0});
  return out;
}

/// Lebesgue measure of T_level.
inline double residual_measure(const CantorSchedule& sched, int level) {
  switch (sched.kind) {
    case CantorSchedule::Kind::ternary: return std::pow(2.0 / 3.0, level);
    case CantorSchedule::Kind::ratio: return std::pow(1.0 - sched.removal_ratio, level);
    case CantorSchedule::Kind::fat: return 0.5 + std::ldexp(1.0, -level - 1);
  }
  return 0.0;
}

/// Lebesgue measure of the limit set T.
inline double limit_measure(const CantorSchedule& sched) {
  return sched.kind == CantorSchedule::Kind::fat ? 0.5 : 0.0;
}

/// Width of a step-k removed interval (all equal at a given step).
inline double removed_width(const CantorSchedule& sched, int step) {
  switch (sched.kind) {
    case CantorSchedule::Kind::ternary: return std::pow(3.0, -step);
    case CantorSchedule::Kind::ratio:
      return sched.removal_ratio * std::pow(0.5 * (1.0 - sched.removal_ratio), step - 1);
    case CantorSchedule::Kind::fat: return std::ldexp(1.0, -2 * step);
  }
  return 0.0;
}

/// Level-i function of the Cantor sequence: a diamond (resp. losange) above
/// every interval removed by steps <= i, double lines x -> 2[[x + p_j]]
/// (resp. 2[[0]]) elsewhere, and both branches 0 at the left end of the
/// first removed interval (x = 1/3 for the ternary schedule).
inline PiecewiseAffineQ cantor_level(const CantorConstruction& c) {
  if (c.level < 1) throw DomainError("cantor_level: level must be >= 1");
  const auto removed = removed_intervals(c.schedule, c.level);
  std::vector<Piece> pieces;
  double left = 0.0;
  double anchor = 0.0;
  for (const auto& r : removed) {
    if (r.span.a > left) pieces.push_back({{left, r.span.a}, false});
    pieces.push_back({r.span, true});
    if (r.step == 1) anchor = r.span.a;
    left = r.span.b;
  }
  if (left < 1.0) pieces.push_back({{left, 1.0}, false});
  return c.flavor == Flavor::diamond ? make_pluri_diamond(pieces, anchor) : make_pluri_losange(pieces);
}

struct CantorLimit {
  PiecewiseAffineQ approximant;
  double uniform_bound = 0.0;  // sup_x G(u^{level}(x), u(x))
};

/// Uniform G-distance bound between the level-i function and the limit.
/// Diamonds: refining a remaining interval by a step-k gap of width w shifts
/// every value beyond it by w/2 per branch, so the bound is
/// (|T_i| - |T|) / sqrt(2). Losanges: values change only inside the new gaps,
/// so the bound is sqrt(2) * (step-(i+1) width) / 2.
inline double cantor_uniform_bound(Flavor f, const CantorSchedule& sched, int level) {
  if (f == Flavor::diamond)
    return (residual_measure(sched, level) - limit_measure(sched)) / std::numbers::sqrt2;
  return std::numbers::sqrt2 * 0.5 * removed_width(sched, level + 1);
}

inline CantorLimit cantor_limit(Flavor f, int level_cap, const CantorSchedule& sched = {}) {
  if (level_cap < 1) throw DomainError("cantor_limit: level_cap must be >= 1");
  return {cantor_level({level_cap, f, sched}), cantor_uniform_bound(f, sched, level_cap)};
}

/// Branch separation u_max - u_min at x.
inline double branch_gap(const PiecewiseAffineQ& u, double x) {
  const auto v = u.branch_values(x);
  return v.back() - v.front();
}

/// Small fixed pluri-losange: losanges above [0.1, 0.3] and [0.5, 0.9].
inline PiecewiseAffineQ pluri_losange_demo() {
  return make_pluri_losange({{{0.0, 0.1}, false}, {{0.1, 0.3}, true}, {{0.3, 0.5}, false}, {{0.5, 0.9}, true},
                             {{0.9, 1.0}, false}});
}

/// Small fixed pluri-diamond: diamonds above [0.2, 0.4] and [0.6, 0.9], anchored at 0.2.
inline PiecewiseAffineQ pluri_diamond_demo() {
  return make_pluri_diamond({{{0.0, 0.2}, false}, {{0.2, 0.4}, true}, {{0.4, 0.6}, false}, {{0.6, 0.9}, true},
                             {{0.9, 1.0}, false}},
                            0.2);
}

// ---------------------------------------------------------------------------
// The two-valued sine example on (-pi/4, pi/4): u(x) = [[x]] + [[sin x]].

inline constexpr double kSinHalfWidth = std::numbers::pi / 4.0;

namespace detail {
inline void require_sin_ball(double x, double r) {
  if (!(r > 0.0)) throw DomainError("sin example: radius must be positive");
  if (std::abs(x) + r > kSinHalfWidth * (1.0 + 1e-15))
    throw DomainError("sin example: ball leaves (-pi/4, pi/4)");
}
}  // namespace detail

/// Dir(sin; U(x, r)) = cos(2x) sin(2r) / 2 + r.
inline double sin_branch_dir(double x, double r) {
  detail::require_sin_ball(x, r);
  return 0.5 * std::cos(2.0 * x) * std::sin(2.0 * r) + r;
}

/// Energy of the straight line joining sin(x - r) to sin(x + r): 2 cos^2 x sin^2 r / r.
inline double sin_branch_min_dir(double x, double r) {
  detail::require_sin_ball(x, r);
  const double c = std::cos(x), s = std::sin(r);
  return 2.0 * c * c * s * s / r;
}

/// Dir(u; U(x, r)) for u = [[x]] + [[sin x]]: 2r from the identity branch plus the sine branch.
inline double sin_dir_u(double x, double r) { return 2.0 * r + sin_branch_dir(x, r); }

/// Energy of the identity-matched comparison (two straight lines joining x-r to
/// x+r and sin(x-r) to sin(x+r)).
inline double sin_dir_v_identity(double x, double r) { return 2.0 * r + sin_branch_min_dir(x, r); }

/// Energy of the true minimizer (sorted matching of the end values).
inline double sin_dir_v_sorted(double x, double r) {
  detail::require_sin_ball(x, r);
  const QPoint left = QPoint::reals({x - r, std::sin(x - r)});
  const QPoint right = QPoint::reals({x + r, std::sin(x + r)});
  return metric_g_squared(left, right) / (2.0 * r);
}

/// omega(r) = r^2 / sin^2 r - 1.
inline double omega_sin(double r) {
  if (!(r > 0.0)) throw DomainError("omega_sin: r must be positive");
  const double s = std::sin(r);
  return r * r / (s * s) - 1.0;
}

/// H(x, r) = (r cos 2x sin 2r + 2 r^2) / cos^2 x; defined for |x| <= pi/4, r > 0.
inline double sin_h(double x, double r) {
  const double c = std::cos(x);
  return (r * std::cos(2.0 * x) * std::sin(2.0 * r) + 2.0 * r * r) / (c * c);
}

/// W(x, r) = H(x, r) / (4 sin^2 r): ratio of the sine-branch energy to its
/// straight-line comparison, as a closed-form function on |x| <= pi/4, r > 0.
inline double sin_w(double x, double r) {
  if (std::abs(x) > kSinHalfWidth * (1.0 + 1e-15) || !(r > 0.0)) throw DomainError("sin_w: outside |x| <= pi/4, r > 0");
  const double s = std::sin(r);
  return sin_h(x, r) / (4.0 * s * s);
}

/// Sorted piecewise-affine sampling of {x, sin x} at n uniform points of
/// [-pi/4, pi/4]; for odd n the middle sample is exactly 0.
inline PiecewiseAffineQ sin_sampled(std::size_t n = 4097) {
  if (n < 2) throw DomainError("sin_sampled: need n >= 2");
  std::vector<double> xs(n), v(2 * n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = kSinHalfWidth * (2.0 * static_cast<double>(k) - last) / last;
    xs[k] = x;
    const double s = std::sin(x);
    v[2 * k] = std::min(x, s);
    v[2 * k + 1] = std::max(x, s);
  }
  return PiecewiseAffineQ(std::move(xs), 2, std::move(v));
}

}  // namespace qvlab::construct
