#pragma once

// Codimension-one Dirichlet minimizers on a disk: sort the boundary values
// pointwise, expand each sorted branch in a Fourier series and extend it
// harmonically. Energies follow from the spectral sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "qvlab/error.hpp"
#include "qvlab/qspace.hpp"
#include "qvlab/regression.hpp"

namespace qvlab::disk {

struct BranchSeries {
  double a0 = 0.0;
  std::vector<double> a;  // a[k-1] multiplies cos(k theta)
  std::vector<double> b;  // b[k-1] multiplies sin(k theta)

  double operator()(double theta) const {
    double v = a0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
      const double kt = static_cast<double>(k) * theta;
      v += a[k - 1] * std::cos(kt) + b[k - 1] * std::sin(kt);
    }
    return v;
  }
  /// Harmonic extension at polar point (rho, theta) of the disk of radius r.
  double extend(double rho, double theta, double r) const {
    double v = a0, p = 1.0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
      p *= rho / r;
      const double kt = static_cast<double>(k) * theta;
      v += p * (a[k - 1] * std::cos(kt) + b[k - 1] * std::sin(kt));
    }
    return v;
  }
};

struct CircleTraceQ {
  double radius = 1.0;
  std::size_t q = 0;
  std::size_t samples = 0;  // N uniform angles 2 pi j / N
  std::size_t modes = 0;    // M
  std::vector<double> values;  // N x Q, row-major, sorted per row
  std::vector<BranchSeries> branches;

  double angle(std::size_t j) const { return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples); }
  double value(std::size_t j, std::size_t i) const { return values[j * q + i]; }
};

using TraceFunction = std::function<QPoint(double)>;

/// Samples the trace at N angles, sorts each sample and computes per-branch
/// Fourier coefficients up to mode M by the discrete transform.
inline CircleTraceQ sorted_trace(const TraceFunction& trace, std::size_t n_samples, std::size_t modes,
                                 double radius = 1.0) {
  if (n_samples < 2 * modes + 1) throw AliasingError("sorted_trace: need N >= 2M + 1");
  if (!(radius > 0.0)) throw DomainError("sorted_trace: radius must be positive");
  CircleTraceQ t;
  t.radius = radius;
  t.samples = n_samples;
  t.modes = modes;
  for (std::size_t j = 0; j < n_samples; ++j) {
    const QPoint p = trace(t.angle(j));
    if (p.n() != 1) throw UnsupportedCodimensionError("sorted_trace: only real-valued (n = 1) traces");
    if (j == 0) {
      t.q = p.q();
      t.values.reserve(n_samples * t.q);
    } else if (p.q() != t.q) {
      throw DimensionError("sorted_trace: Q changes along the circle");
    }
    std::vector<double> row(p.coords().begin(), p.coords().end());
    std::sort(row.begin(), row.end());
    t.values.insert(t.values.end(), row.begin(), row.end());
  }
  std::vector<double> cos_table(n_samples), sin_table(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    cos_table[j] = std::cos(t.angle(j));
    sin_table[j] = std::sin(t.angle(j));
  }
  const double norm = 2.0 / static_cast<double>(n_samples);
  t.branches.resize(t.q);
  for (std::size_t i = 0; i < t.q; ++i) {
    auto& br = t.branches[i];
    br.a.assign(modes, 0.0);
    br.b.assign(modes, 0.0);
    double mean = 0.0;
    bool constant = true;
    for (std::size_t j = 0; j < n_samples; ++j) {
      mean += t.value(j, i);
      constant = constant && t.value(j, i) == t.value(0, i);
    }
    br.a0 = mean / static_cast<double>(n_samples);
    if (constant) {
      br.a0 = t.value(0, i);
      continue;
    }
    for (std::size_t k = 1; k <= modes; ++k) {
      double ca = 0.0, sb = 0.0;
      for (std::size_t j = 0; j < n_samples; ++j) {
        const std::size_t idx = (k * j) % n_samples;
        ca += t.value(j, i) * cos_table[idx];
        sb += t.value(j, i) * sin_table[idx];
      }
      // The Nyquist mode (2k = N) carries half weight in the cosine series.
      const double w = 2 * k == n_samples ? 0.5 : 1.0;
      br.a[k - 1] = w * norm * ca;
      br.b[k - 1] = 2 * k == n_samples ? 0.0 : norm * sb;
    }
  }
  return t;
}

/// Largest deviation between the truncated series and the samples.
inline double fourier_residual(const CircleTraceQ& t) {
  double worst = 0.0;
  for (std::size_t j = 0; j < t.samples; ++j)
    for (std::size_t i = 0; i < t.q; ++i) worst = std::max(worst, std::abs(t.branches[i](t.angle(j)) - t.value(j, i)));
  return worst;
}

struct DiskMinimizer {
  CircleTraceQ trace;
  double dir_interior = 0.0;  // sum over branches of pi sum_k k (a_k^2 + b_k^2)
  double dir_boundary = 0.0;  // sum over branches of (pi / r) sum_k k^2 (a_k^2 + b_k^2)
  double upper_half_energy = 0.0;  // interior energy carried by modes in (M/2, M]; truncation indicator
};

/// Sorted harmonic extension and its exact spectral energies.
inline DiskMinimizer minimize_disk(CircleTraceQ trace) {
  DiskMinimizer m;
  const double pi = std::numbers::pi;
  for (const auto& br : trace.branches) {
    for (std::size_t k = 1; k <= br.a.size(); ++k) {
      const double c2 = br.a[k - 1] * br.a[k - 1] + br.b[k - 1] * br.b[k - 1];
      const double kd = static_cast<double>(k);
      m.dir_interior += pi * kd * c2;
      m.dir_boundary += pi * kd * kd * c2 / trace.radius;
      if (2 * k > br.a.size()) m.upper_half_energy += pi * kd * c2;
    }
  }
  m.trace = std::move(trace);
  return m;
}

struct SqueezeCheck {
  bool holds = false;
  double lhs = 0.0;     // Dir(u; U(0, r))
  double rhs = 0.0;     // Q r dir(v; boundary)
  double margin = 0.0;  // rhs - lhs
};

/// Dir(u; U(0, r)) <= Q r dir(v; dU(0, r)).
inline SqueezeCheck check_squeeze_2d(const DiskMinimizer& m) {
  SqueezeCheck c;
  c.lhs = m.dir_interior;
  c.rhs = static_cast<double>(m.trace.q) * m.trace.radius * m.dir_boundary;
  c.margin = c.rhs - c.lhs;
  c.holds = c.margin >= 0.0;
  return c;
}

struct DecayProfile2D {
  std::vector<double> scales;
  std::vector<double> energies;  // Dir over the concentric subdisk of radius s r
  bool skipped = false;          // identically zero energy
  double slope = 0.0;            // log-log slope, 2 k_min for a clean lowest mode
};

inline DecayProfile2D decay_profile_2d(const DiskMinimizer& m, const std::vector<double>& scales) {
  DecayProfile2D p;
  const double pi = std::numbers::pi;
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("decay_profile_2d: scales must lie in (0, 1]");
    double e = 0.0;
    for (const auto& br : m.trace.branches)
      for (std::size_t k = 1; k <= br.a.size(); ++k) {
        const double c2 = br.a[k - 1] * br.a[k - 1] + br.b[k - 1] * br.b[k - 1];
        e += pi * static_cast<double>(k) * std::pow(s, 2.0 * static_cast<double>(k)) * c2;
      }
    p.scales.push_back(s);
    p.energies.push_back(e);
  }
  if (std::all_of(p.energies.begin(), p.energies.end(), [](double e) { return e == 0.0; })) {
    p.skipped = true;
    return p;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < p.scales.size(); ++k) {
    if (p.energies[k] <= 0.0) continue;
    lx.push_back(std::log(p.scales[k]));
    ly.push_back(std::log(p.energies[k]));
  }
  if (lx.size() >= 2) p.slope = least_squares(lx, ly).slope;
  return p;
}

// Named traces.

inline TraceFunction constant_trace(std::size_t q, double c) {
  return [q, c](double) { return QPoint::reals(std::vector<double>(q, c)); };
}

inline TraceFunction cos_trace() {
  return [](double th) { return QPoint::reals({std::cos(th)}); };
}

/// theta -> [[cos(theta/2)]] + [[-cos(theta/2)]], the two sheets of Re z^{1/2}.
inline TraceFunction sqrt_z_trace() {
  return [](double th) {
    const double c = std::cos(0.5 * th);
    return QPoint::reals({c, -c});
  };
}

/// theta -> [[cos theta + cos 3 theta]].
inline TraceFunction mixed_mode_trace() {
  return [](double th) { return QPoint::reals({std::cos(th) + std::cos(3.0 * th)}); };
}

/// Q independent random trigonometric polynomials of degree <= max_mode with
/// coefficients ~ N(0, 1/k^2); sorting happens in sorted_trace.
template <class Rng>
TraceFunction random_band_limited_trace(Rng& rng, std::size_t q, std::size_t max_mode) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<BranchSeries> sheets(q);
  for (auto& s : sheets) {
    s.a0 = normal(rng);
    for (std::size_t k = 1; k <= max_mode; ++k) {
      s.a.push_back(normal(rng) / static_cast<double>(k));
      s.b.push_back(normal(rng) / static_cast<double>(k));
    }
  }
  return [sheets](double th) {
    std::vector<double> v;
    for (const auto& s : sheets) v.push_back(s(th));
    return QPoint::reals(std::move(v));
  };
}

}  // namespace qvlab::disk
