#pragma once

// The space of unordered Q-tuples of points of R^n with the matching metric,
// plus the point-separation (cluster selection) and semi-retraction
// procedures used in the almost-minimizer regularity theory.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvlab/assignment.hpp"
#include "qvlab/error.hpp"

namespace qvlab {

/// An unordered Q-tuple of points in R^n. Coordinates are stored point-major;
/// the storage order carries no meaning.
class QPoint {
 public:
  QPoint() = default;

  QPoint(std::size_t q, std::size_t n, std::vector<double> coords)
      : q_(q), n_(n), coords_(std::move(coords)) {
    if (q_ == 0 || n_ == 0) throw DimensionError("QPoint: Q and n must be positive");
    if (coords_.size() != q_ * n_) throw DimensionError("QPoint: expected Q*n coordinates");
    for (double c : coords_)
      if (!std::isfinite(c)) throw DomainError("QPoint: non-finite coordinate");
  }

  /// Q points on the real line.
  static QPoint reals(std::vector<double> values) {
    const std::size_t q = values.size();
    return QPoint(q, 1, std::move(values));
  }

  /// q copies of a single point, q[[y]].
  static QPoint repeated(std::size_t q, std::span<const double> y) {
    std::vector<double> c;
    c.reserve(q * y.size());
    for (std::size_t i = 0; i < q; ++i) c.insert(c.end(), y.begin(), y.end());
    return QPoint(q, y.size(), std::move(c));
  }

  /// sum_j k_j [[p_j]].
  static QPoint weighted(std::span<const std::vector<double>> centers,
                         std::span<const std::size_t> multiplicity) {
    if (centers.empty() || centers.size() != multiplicity.size())
      throw DimensionError("QPoint::weighted: centers and multiplicities disagree");
    const std::size_t n = centers.front().size();
    std::vector<double> c;
    std::size_t q = 0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (centers[j].size() != n) throw DimensionError("QPoint::weighted: ragged centers");
      for (std::size_t k = 0; k < multiplicity[j]; ++k)
        c.insert(c.end(), centers[j].begin(), centers[j].end());
      q += multiplicity[j];
    }
    return QPoint(q, n, std::move(c));
  }

  std::size_t q() const { return q_; }
  std::size_t n() const { return n_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * n_, n_}; }
  std::span<const double> coords() const { return coords_; }

  /// Points in lexicographic order; two QPoints are equal iff these agree.
  std::vector<std::vector<double>> sorted_points() const {
    std::vector<std::vector<double>> pts;
    pts.reserve(q_);
    for (std::size_t i = 0; i < q_; ++i) pts.emplace_back(point(i).begin(), point(i).end());
    std::sort(pts.begin(), pts.end());
    return pts;
  }

  friend bool operator==(const QPoint& a, const QPoint& b) {
    return a.q_ == b.q_ && a.n_ == b.n_ && a.sorted_points() == b.sorted_points();
  }

 private:
  std::size_t q_ = 0;
  std::size_t n_ = 0;
  std::vector<double> coords_;
};

namespace detail {

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

inline void require_compatible(const QPoint& a, const QPoint& b) {
  if (a.q() != b.q() || a.n() != b.n())
    throw DimensionError("matching metric: arguments differ in Q or n (" + std::to_string(a.q()) + "x" +
                         std::to_string(a.n()) + " vs " + std::to_string(b.q()) + "x" +
                         std::to_string(b.n()) + ")");
}

inline std::vector<std::size_t> lexicographic_order(const QPoint& a) {
  std::vector<std::size_t> idx(a.q());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const auto pi = a.point(i), pj = a.point(j);
    return std::lexicographical_compare(pi.begin(), pi.end(), pj.begin(), pj.end());
  });
  return idx;
}

}  // namespace detail

/// Optimal matching: entry i is the index of the point of `b` paired with
/// point i of `a`. In one dimension the sorted pairing is optimal.
inline std::vector<std::size_t> optimal_matching(const QPoint& a, const QPoint& b) {
  detail::require_compatible(a, b);
  const std::size_t q = a.q();
  if (a.n() == 1) {
    const auto ia = detail::lexicographic_order(a);
    const auto ib = detail::lexicographic_order(b);
    std::vector<std::size_t> match(q);
    for (std::size_t k = 0; k < q; ++k) match[ia[k]] = ib[k];
    return match;
  }
  std::vector<double> cost(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) cost[i * q + j] = detail::squared_distance(a.point(i), b.point(j));
  return assignment::solve(cost, q).column_of_row;
}

inline double metric_g_squared(const QPoint& a, const QPoint& b) {
  const auto match = optimal_matching(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.q(); ++i) s += detail::squared_distance(a.point(i), b.point(match[i]));
  return s;
}

/// The matching metric G(a, b) = min over permutations of the root-sum-square distance.
inline double metric_g(const QPoint& a, const QPoint& b) { return std::sqrt(metric_g_squared(a, b)); }

struct SupportPoint {
  std::vector<double> point;
  std::size_t multiplicity = 0;
};

/// Single-linkage clusters of the Q points at distance <= tol; each cluster is
/// represented by its lexicographically smallest member. tol = 0 yields the
/// exact support with multiplicities.
inline std::vector<SupportPoint> support_with_multiplicity(const QPoint& a, double tol) {
  if (tol < 0.0) throw DomainError("support_with_multiplicity: tol must be nonnegative");
  const auto order = detail::lexicographic_order(a);
  const std::size_t q = a.q();
  std::vector<std::size_t> label(q, q);
  std::size_t next = 0;
  const double tol2 = tol * tol;
  for (std::size_t s = 0; s < q; ++s) {
    const std::size_t seed = order[s];
    if (label[seed] != q) continue;
    label[seed] = next;
    std::vector<std::size_t> stack{seed};
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < q; ++j) {
        if (label[j] != q) continue;
        if (detail::squared_distance(a.point(i), a.point(j)) <= tol2) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  std::vector<SupportPoint> out(next);
  for (std::size_t s = 0; s < q; ++s) {
    const std::size_t i = order[s];
    auto& c = out[label[i]];
    if (c.multiplicity++ == 0) c.point.assign(a.point(i).begin(), a.point(i).end());
  }
  return out;
}

/// Number of distinct points (card spt) at tolerance tol.
inline std::size_t support_size(const QPoint& a, double tol) {
  if (a.n() == 1) {
    // Sorted reals: single linkage reduces to consecutive gaps.
    std::vector<double> v(a.coords().begin(), a.coords().end());
    std::sort(v.begin(), v.end());
    std::size_t count = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] - v[i - 1] > tol) ++count;
    return count;
  }
  return support_with_multiplicity(a, tol).size();
}

inline double support_diameter(const QPoint& a) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.q(); ++i)
    for (std::size_t j = i + 1; j < a.q(); ++j)
      d2 = std::max(d2, detail::squared_distance(a.point(i), a.point(j)));
  return std::sqrt(d2);
}

/// C(Q) = sum_{t=0}^{Q-1} [2K(Q-1)^2]^t.
inline double c_of_q(std::size_t q, double k) {
  if (q == 0) throw DomainError("c_of_q: Q must be positive");
  if (!(k > 1.0)) throw DomainError("c_of_q: K must exceed 1");
  const double ratio = 2.0 * k * static_cast<double>((q - 1) * (q - 1));
  double term = 1.0, sum = 0.0;
  for (std::size_t t = 0; t < q; ++t) {
    sum += term;
    term *= ratio;
  }
  return sum;
}

/// C2(Q) = C(Q) / (Q-1)^{1/2}; undefined for Q = 1.
inline double c2_of_q(std::size_t q, double k) {
  if (q < 2) throw DomainError("c2_of_q: requires Q >= 2");
  return c_of_q(q, k) / std::sqrt(static_cast<double>(q - 1));
}

struct ClusterSelection {
  std::vector<std::size_t> multiplicities;  // k_1..k_J
  std::vector<std::vector<double>> centers;  // p_1..p_J, drawn from the input points
  double r = 0.0;
  double s0 = 0.0;
  double separation_k = 0.0;

  std::size_t j() const { return centers.size(); }
  QPoint q0() const { return QPoint::weighted(centers, multiplicities); }
};

namespace detail {

struct Clustering {
  std::vector<std::size_t> multiplicities;
  std::vector<std::vector<double>> centers;
};

// Single-linkage components at `threshold`, each represented by its medoid.
inline Clustering cluster_at(const QPoint& a, const std::vector<std::size_t>& order, double threshold) {
  const std::size_t q = a.q();
  std::vector<std::size_t> label(q, q);
  std::size_t next = 0;
  const double t2 = threshold * threshold;
  for (std::size_t s = 0; s < q; ++s) {
    if (label[order[s]] != q) continue;
    label[order[s]] = next;
    std::vector<std::size_t> stack{order[s]};
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < q; ++j)
        if (label[j] == q && squared_distance(a.point(i), a.point(j)) <= t2) {
          label[j] = next;
          stack.push_back(j);
        }
    }
    ++next;
  }
  Clustering out;
  for (std::size_t c = 0; c < next; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t s = 0; s < q; ++s)
      if (label[order[s]] == c) members.push_back(order[s]);
    std::size_t best = members.front();
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t m : members) {
      double cost = 0.0;
      for (std::size_t o : members) cost += squared_distance(a.point(m), a.point(o));
      if (cost < best_cost) {
        best_cost = cost;
        best = m;
      }
    }
    out.multiplicities.push_back(members.size());
    out.centers.emplace_back(a.point(best).begin(), a.point(best).end());
  }
  return out;
}

}  // namespace detail

/// Point separation: finds J, multiplicities k_i, distinct centers p_i among the
/// input points and a radius s0 <= r <= C(Q) s0 with the centers more than 2Kr
/// apart and every z within s0 of `a` lying within r of sum k_i [[p_i]].
///
/// The radius is grown by r <- s0 + G(a, q0) until the single-linkage
/// clustering at scale 2Kr stops changing; every growth step merges clusters,
/// so there are at most Q-1 of them.
inline ClusterSelection select_clusters(const QPoint& a, double s0, double k) {
  if (!(s0 > 0.0)) throw DomainError("select_clusters: s0 must be positive");
  if (!(k > 1.0)) throw DomainError("select_clusters: K must exceed 1");
  const auto order = detail::lexicographic_order(a);
  double r = s0;
  for (std::size_t step = 0; step <= a.q(); ++step) {
    auto clusters = detail::cluster_at(a, order, 2.0 * k * r);
    const double g = metric_g(a, QPoint::weighted(clusters.centers, clusters.multiplicities));
    const double needed = s0 + g;
    if (needed <= r) {
      return ClusterSelection{std::move(clusters.multiplicities), std::move(clusters.centers), r, s0, k};
    }
    r = needed;
  }
  // Unreachable: the clustering coarsens strictly at each step.
  throw DomainError("select_clusters: search did not settle");
}

struct RetractionParams {
  double s1 = 0.0;
  double s2 = 0.0;  // +inf when J = 1
  ClusterSelection selection;
};

/// s2 = half the minimal center separation; requires 0 < s1 < s2.
inline RetractionParams make_retraction_params(ClusterSelection selection, double s1) {
  double min_sep2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < selection.j(); ++i)
    for (std::size_t j = i + 1; j < selection.j(); ++j)
      min_sep2 = std::min(min_sep2, detail::squared_distance(selection.centers[i], selection.centers[j]));
  const double s2 = 0.5 * std::sqrt(min_sep2);
  if (!(s1 > 0.0) || !(s1 < s2)) throw DomainError("semi-retraction: need 0 < s1 < s2");
  return RetractionParams{s1, s2, std::move(selection)};
}

/// Lipschitz bound 1 + Q^{1/2} s1 / (s2 - s1) (equals 1 when s2 is infinite).
inline double retraction_lipschitz_bound(const RetractionParams& p, std::size_t q) {
  if (std::isinf(p.s2)) return 1.0;
  return 1.0 + std::sqrt(static_cast<double>(q)) * p.s1 / (p.s2 - p.s1);
}

/// Semi-retraction onto the class of tuples having exactly k_j points in each
/// closed ball B(p_j, s1). Identity within s1 of q0, constant q0 beyond s2;
/// in between each point moves toward its optimally matched center by
/// t = max(1 - s1/G, (G - s1)/(s2 - s1)).
inline QPoint semi_retraction(const QPoint& q, const RetractionParams& params) {
  const QPoint q0 = params.selection.q0();
  detail::require_compatible(q, q0);
  const auto match = optimal_matching(q, q0);
  double g2 = 0.0;
  for (std::size_t i = 0; i < q.q(); ++i) g2 += detail::squared_distance(q.point(i), q0.point(match[i]));
  const double g = std::sqrt(g2);
  if (g <= params.s1) return q;
  if (g >= params.s2) return q0;
  double t = 1.0 - params.s1 / g;
  if (std::isfinite(params.s2)) t = std::max(t, (g - params.s1) / (params.s2 - params.s1));
  t = std::clamp(t, 0.0, 1.0);
  std::vector<double> out(q.coords().begin(), q.coords().end());
  const std::size_t n = q.n();
  for (std::size_t i = 0; i < q.q(); ++i) {
    const auto target = q0.point(match[i]);
    for (std::size_t c = 0; c < n; ++c) out[i * n + c] += t * (target[c] - out[i * n + c]);
  }
  return QPoint(q.q(), n, std::move(out));
}

/// Membership in the class P: each closed ball B(p_j, s1) holds exactly k_j points.
inline bool in_retraction_class(const QPoint& q, const RetractionParams& params, double slack = 1e-12) {
  const auto& sel = params.selection;
  for (std::size_t j = 0; j < sel.j(); ++j) {
    std::size_t count = 0;
    const double rad = params.s1 * (1.0 + slack);
    for (std::size_t i = 0; i < q.q(); ++i)
      if (detail::squared_distance(q.point(i), sel.centers[j]) <= rad * rad) ++count;
    if (count != sel.multiplicities[j]) return false;
  }
  return true;
}

}  // namespace qvlab
