#pragma once

// Minimality auditors for one-dimensional Q-valued functions: empirical
// quasiminimality constant K, omega profile, and (c, alpha) almost-minimality,
// all measured against the exact interval minimizer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qvlab/error.hpp"
#include "qvlab/func1d.hpp"
#include "qvlab/qspace.hpp"
#include "qvlab/regression.hpp"

namespace qvlab {

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double center() const { return 0.5 * (a + b); }
  double radius() const { return 0.5 * (b - a); }
  friend bool operator<(const Interval& x, const Interval& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  }
  friend bool operator==(const Interval& x, const Interval& y) = default;
};

inline Interval ball(double center, double radius) { return {center - radius, center + radius}; }

enum class AuditMode { quasi_k, omega, almost };

inline std::string to_string(AuditMode m) {
  switch (m) {
    case AuditMode::quasi_k: return "quasi_K";
    case AuditMode::omega: return "omega";
    case AuditMode::almost: return "almost";
  }
  return "?";
}

struct AuditRecord {
  double center = 0.0;
  double radius = 0.0;
  double dir_u = 0.0;
  double dir_min = 0.0;
  double figure = 0.0;  // ratio, omega value or deficiency depending on mode
  std::size_t family_index = 0;  // position in the audited family

  Interval interval() const { return ball(center, radius); }
};

struct MinimalityReport {
  AuditMode mode = AuditMode::quasi_k;
  double alpha = 0.0;  // almost mode only
  std::vector<AuditRecord> records;
  double supremum = 0.0;
  std::optional<std::size_t> witness;  // index into records

  const AuditRecord& witness_record() const { return records.at(witness.value()); }
};

/// Relative tolerance inside which two figures of merit count as tied; ties
/// go to the lexicographically smallest (a, b).
inline constexpr double kWitnessTieTolerance = 1e-12;

namespace detail {

inline std::size_t audit_threads() {
  if (const char* env = std::getenv("QVLAB_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  return 1;
}

// Evaluates fn(i) for i in [0, n) into slot i; chunked across threads, result
// order independent of the thread count.
template <class Fn>
void parallel_fill(std::size_t n, Fn&& fn) {
  const std::size_t threads = std::min(audit_threads(), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk, end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

inline void finalize(MinimalityReport& rep) {
  rep.supremum = 0.0;
  rep.witness.reset();
  if (rep.records.empty()) return;
  double sup = -std::numeric_limits<double>::infinity();
  for (const auto& r : rep.records) sup = std::max(sup, r.figure);
  rep.supremum = sup;
  const double floor = std::isinf(sup) ? sup : sup - kWitnessTieTolerance * std::abs(sup);
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    const auto& r = rep.records[i];
    if (!(r.figure >= floor)) continue;
    if (!rep.witness || r.interval() < rep.records[*rep.witness].interval()) rep.witness = i;
  }
}

inline void require_inside(const PiecewiseAffineQ& u, const Interval& iv) {
  if (!(iv.a < iv.b)) throw EmptyIntervalError("audit: empty interval");
  if (iv.a < u.lo() || iv.b > u.hi()) throw DomainError("audit: interval leaves the domain");
}

struct Evaluated {
  double dir_u;
  double dir_min;
};

inline Evaluated evaluate(const PiecewiseAffineQ& u, const Interval& iv) {
  const double e = dirichlet_energy(u, iv.a, iv.b);
  const double g2 = metric_g_squared(u.eval(iv.b), u.eval(iv.a));
  return {e, g2 / (iv.b - iv.a)};
}

template <class Figure>
MinimalityReport run_audit(const PiecewiseAffineQ& u, const std::vector<Interval>& family, AuditMode mode,
                           double alpha, Figure&& figure) {
  for (const auto& iv : family) require_inside(u, iv);
  std::vector<std::optional<AuditRecord>> slots(family.size());
  parallel_fill(family.size(), [&](std::size_t i) {
    const auto& iv = family[i];
    const auto ev = evaluate(u, iv);
    if (auto f = figure(ev, iv)) slots[i] = AuditRecord{iv.center(), iv.radius(), ev.dir_u, ev.dir_min, *f, i};
  });
  MinimalityReport rep;
  rep.mode = mode;
  rep.alpha = alpha;
  for (auto& s : slots)
    if (s) rep.records.push_back(*s);
  finalize(rep);
  return rep;
}

}  // namespace detail

/// Interval family used by the audits: every pair of breakpoints plus the
/// cells of the dyadic and triadic partitions of the domain at depths 1..depth.
inline std::vector<Interval> interval_family(const PiecewiseAffineQ& u, int depth,
                                             std::size_t max_breakpoint_pairs = 2'000'000) {
  std::vector<Interval> out;
  const auto x = u.breakpoints();
  const std::size_t n = x.size();
  if (n * (n - 1) / 2 <= max_breakpoint_pairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.push_back({x[i], x[j]});
  } else {
    // Too many breakpoints: keep pairs up to a fixed index span.
    const std::size_t span = std::max<std::size_t>(1, max_breakpoint_pairs / n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n && j <= i + span; ++j) out.push_back({x[i], x[j]});
  }
  const double lo = u.lo(), len = u.hi() - u.lo();
  for (long base : {2L, 3L}) {
    long cells = 1;
    for (int d = 1; d <= depth; ++d) {
      cells *= base;
      const double denom = static_cast<double>(cells);
      for (long k = 0; k < cells; ++k) {
        const double a = k == 0 ? u.lo() : lo + len * (static_cast<double>(k) / denom);
        const double b = k + 1 == cells ? u.hi() : lo + len * (static_cast<double>(k + 1) / denom);
        out.push_back({a, b});
      }
    }
  }
  return out;
}

/// Per interval, (b - a) Dir(u; (a, b)) / G^2(u(b), u(a)); the supremum is the
/// empirical quasiminimality constant. Dir > 0 with G = 0 gives +inf; 0/0 is skipped.
inline MinimalityReport quasi_k_ratio(const PiecewiseAffineQ& u, const std::vector<Interval>& intervals) {
  return detail::run_audit(u, intervals, AuditMode::quasi_k, 0.0,
                           [](const detail::Evaluated& ev, const Interval&) -> std::optional<double> {
                             if (ev.dir_min == 0.0) {
                               if (ev.dir_u == 0.0) return std::nullopt;
                               return std::numeric_limits<double>::infinity();
                             }
                             return ev.dir_u / ev.dir_min;
                           });
}

/// Dir(u; ball) / Dir_min - 1 on each ball; +inf when only the minimizer vanishes.
inline MinimalityReport omega_audit(const PiecewiseAffineQ& u, const std::vector<Interval>& balls) {
  return detail::run_audit(u, balls, AuditMode::omega, 0.0,
                           [](const detail::Evaluated& ev, const Interval&) -> std::optional<double> {
                             if (ev.dir_min == 0.0) {
                               if (ev.dir_u == 0.0) return std::nullopt;
                               return std::numeric_limits<double>::infinity();
                             }
                             return std::max(0.0, ev.dir_u / ev.dir_min - 1.0);
                           });
}

struct OmegaProfile {
  std::vector<double> radii;
  std::vector<double> omega;           // sup over centers; NaN when every center was skipped
  std::vector<double> witness_center;  // argmax center per radius
  MinimalityReport report;
};

/// Empirical omega(r) = sup_x (Dir(u; U(x, r)) / Dir_min - 1) for each radius.
inline OmegaProfile omega_profile(const PiecewiseAffineQ& u, const std::vector<double>& radii,
                                  const std::vector<double>& centers) {
  std::vector<Interval> balls;
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("omega_profile: radii must be positive");
    for (double x : centers) balls.push_back(ball(x, r));
  }
  OmegaProfile prof;
  prof.report = omega_audit(u, balls);
  prof.radii = radii;
  prof.omega.assign(radii.size(), std::numeric_limits<double>::quiet_NaN());
  prof.witness_center.assign(radii.size(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& rec : prof.report.records) {
    const std::size_t k = rec.family_index / centers.size();
    if (std::isnan(prof.omega[k]) || rec.figure > prof.omega[k]) {
      prof.omega[k] = rec.figure;
      prof.witness_center[k] = centers[rec.family_index % centers.size()];
    }
  }
  return prof;
}

/// Smallest c with Dir(u) <= Dir_min + c r^{alpha - 1} on each ball (m = 1):
/// c = max(0, Dir(u) - Dir_min) r^{1 - alpha}.
inline MinimalityReport almost_deficiency(const PiecewiseAffineQ& u, double alpha, const std::vector<Interval>& balls) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("almost_deficiency: alpha must lie in (0, 1)");
  return detail::run_audit(u, balls, AuditMode::almost, alpha,
                           [alpha](const detail::Evaluated& ev, const Interval& iv) -> std::optional<double> {
                             return std::max(0.0, ev.dir_u - ev.dir_min) * std::pow(iv.radius(), 1.0 - alpha);
                           });
}

struct DecayFit {
  std::vector<double> scales;
  std::vector<double> energies;
  LinearFit fit;
  double exponent() const { return fit.slope; }
};

/// Least-squares slope of log Dir(u; U(z, s r0)) against log s.
inline DecayFit energy_decay_exponent(const PiecewiseAffineQ& u, double z, double r0, const std::vector<double>& scales) {
  if (!(r0 > 0.0) || z - r0 < u.lo() || z + r0 > u.hi())
    throw DomainError("energy_decay_exponent: ball U(z, r0) leaves the domain");
  if (scales.size() < 2) throw DomainError("energy_decay_exponent: need at least two scales");
  if (dirichlet_energy(u, z - r0, z + r0) == 0.0)
    throw UndefinedExponentError("energy_decay_exponent: zero energy at r0");
  DecayFit out;
  std::vector<double> lx, ly;
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("energy_decay_exponent: scales must lie in (0, 1]");
    const double e = dirichlet_energy(u, z - s * r0, z + s * r0);
    if (e == 0.0) throw UndefinedExponentError("energy_decay_exponent: zero energy at a sub-scale");
    out.scales.push_back(s);
    out.energies.push_back(e);
    lx.push_back(std::log(s));
    ly.push_back(std::log(e));
  }
  out.fit = least_squares(lx, ly);
  return out;
}

/// Geometric scales 1, 1/base, ..., base^{-(count-1)}.
inline std::vector<double> geometric_scales(double base, int count) {
  std::vector<double> s;
  double v = 1.0;
  for (int k = 0; k < count; ++k, v /= base) s.push_back(v);
  return s;
}

}  // namespace qvlab
