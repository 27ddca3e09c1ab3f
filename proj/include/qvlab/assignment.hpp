#pragma once

// Square linear assignment: exhaustive search for small sizes and the
// O(n^3) shortest augmenting path (Hungarian) method above that.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace qvlab::assignment {

struct Result {
  double cost = 0.0;
  std::vector<std::size_t> column_of_row;
};

/// `cost` is row-major n x n.
inline Result exhaustive(std::span<const double> cost, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Result best{std::numeric_limits<double>::infinity(), perm};
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += cost[i * n + perm[i]];
    if (c < best.cost) {
      best.cost = c;
      best.column_of_row = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (n == 0) best.cost = 0.0;
  return best;
}

/// Jonker-Volgenant style potentials; 1-based internal indexing.
inline Result hungarian(std::span<const double> cost, std::size_t n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Result r;
  r.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) r.column_of_row[p[j] - 1] = j - 1;
  // Re-sum from the original matrix so the cost carries no potential drift.
  for (std::size_t i = 0; i < n; ++i) r.cost += cost[i * n + r.column_of_row[i]];
  return r;
}

inline constexpr std::size_t kExhaustiveLimit = 8;

inline Result solve(std::span<const double> cost, std::size_t n) {
  return n <= kExhaustiveLimit ? exhaustive(cost, n) : hungarian(cost, n);
}

}  // namespace qvlab::assignment
