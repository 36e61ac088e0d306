#pragma once

// Slow, independent reference solvers used to cross-check the production
// algorithms (tests, acceptance suite and the CLI's --oracle mode). Nothing
// here shares code paths with meb.hpp, path_metric.hpp or clustering.hpp.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "wspdfuse/geometry.hpp"

namespace wspdfuse::reference {

namespace detail {

// Gaussian elimination with partial pivoting; nullopt if singular.
inline std::optional<std::vector<double>> solve(std::vector<std::vector<double>> a,
                                                std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

// Smallest ball with every point of `support` on its boundary: the
// circumcenter inside the support's affine hull.
inline std::optional<Ball> circumball(const PointSet& s, const std::vector<std::size_t>& support) {
  const std::size_t dim = s.dim();
  const auto q0 = s[support[0]];
  const std::size_t m = support.size() - 1;
  Ball b;
  b.center.assign(q0.begin(), q0.end());
  if (m == 0) return b;
  std::vector<std::vector<double>> v(m, std::vector<double>(dim));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t d = 0; d < dim; ++d) v[i][d] = s[support[i + 1]][d] - q0[d];
  std::vector<std::vector<double>> gram(m, std::vector<double>(m));
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0;
      for (std::size_t d = 0; d < dim; ++d) dot += v[i][d] * v[j][d];
      gram[i][j] = dot;
    }
    rhs[i] = 0.5 * gram[i][i];
  }
  auto lambda = solve(gram, rhs);
  if (!lambda) return std::nullopt;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t d = 0; d < dim; ++d) b.center[d] += (*lambda)[i] * v[i][d];
  b.radius = euclidean_distance(b.center, q0);
  return b;
}

}  // namespace detail

/// Exact minimum enclosing ball by exhausting every support set of at most
/// dim + 1 points. Exponential; meant for |S| <= ~20 and dim <= 3.
inline Ball exact_min_enclosing_ball(const PointSet& s) {
  const std::size_t n = s.size();
  const std::size_t max_support = std::min(n, s.dim() + 1);
  Ball best;
  best.radius = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  auto consider = [&] {
    auto b = detail::circumball(s, pick);
    if (!b || b->radius >= best.radius) return;
    for (std::size_t i = 0; i < n; ++i)
      if (euclidean_distance(b->center, s[i]) > b->radius * (1 + 1e-12) + 1e-300) return;
    best = *b;
  };
  // Enumerate increasing index combinations of size 1..max_support.
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!pick.empty()) consider();
    if (pick.size() == max_support) return;
    for (std::size_t i = start; i < n; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

/// Exact minimum enclosing ball by Welzl's randomized recursion (input order
/// is used as-is; callers shuffle if they want the expected-time bound).
/// Boundary sets use the affine-hull circumball, so this is exact for points
/// in general position in any dimension.
inline Ball welzl_min_enclosing_ball(const PointSet& s) {
  const std::size_t max_boundary = s.dim() + 1;
  std::vector<std::size_t> boundary;
  auto inside = [&](const std::optional<Ball>& b, std::size_t i) {
    return b && euclidean_distance(b->center, s[i]) <= b->radius * (1 + 1e-12) + 1e-300;
  };
  auto rec = [&](auto&& self, std::size_t n) -> std::optional<Ball> {
    if (n == 0 || boundary.size() == max_boundary)
      return boundary.empty() ? std::nullopt : detail::circumball(s, boundary);
    auto ball = self(self, n - 1);
    if (inside(ball, n - 1)) return ball;
    boundary.push_back(n - 1);
    auto out = self(self, n - 1);
    boundary.pop_back();
    return out;
  };
  auto b = rec(rec, s.size());
  if (!b) throw PreconditionError("degenerate boundary set in reference solver");
  return *b;
}

/// Textbook O(N^2) Dijkstra on the complete graph with weights |a-b|^p.
/// Unsettled vertex with the smallest (distance, index) is settled next.
/// Returns the full distance vector and the settle order.
struct DenseDijkstra {
  std::vector<double> dist;
  std::vector<std::size_t> order;
};

inline DenseDijkstra dense_dijkstra(const PointSet& pts, std::size_t source, double p) {
  const std::size_t n = pts.size();
  DenseDijkstra r;
  r.dist.assign(n, std::numeric_limits<double>::infinity());
  std::vector<bool> done(n, false);
  r.dist[source] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && (u == n || r.dist[v] < r.dist[u])) u = v;
    done[u] = true;
    r.order.push_back(u);
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      double w = std::sqrt(squared_distance(pts[u], pts[v]));
      if (p != 1.0) w = std::pow(w, p);
      if (r.dist[u] + w < r.dist[v]) r.dist[v] = r.dist[u] + w;
    }
  }
  return r;
}

/// Exhaustive k-medoids optimum: minimum over all k-subsets of medoids of
/// sum_i min_c m[i][c]. `at(i, j)` is any callable distance lookup.
template <class Dist>
double exhaustive_kmedoids_cost(std::size_t n, std::size_t k, Dist at) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (pick.size() == k) {
      double cost = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t c : pick) m = std::min(m, at(i, c));
        cost += m;
      }
      best = std::min(best, cost);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace wspdfuse::reference
