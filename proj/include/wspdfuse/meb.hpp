#pragma once

// (1+eps)-approximate minimum enclosing ball in arbitrary dimension.
//
// Frank-Wolfe with away steps on the dual problem
//   maximize  phi(u) = sum_i u_i |p_i - c(u)|^2,   c(u) = sum_i u_i p_i,
// over the unit simplex. phi(u) <= r*^2 for every feasible u, so stopping once
// max_i |p_i - c|^2 <= (1+eps)^2 phi(u) certifies radius <= (1+eps) r*.
// The reported radius is the farthest-point distance from the final center,
// so every input point is contained regardless of the iteration count.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wspdfuse/geometry.hpp"

namespace wspdfuse {

inline constexpr double kDefaultBallEps = 1e-6;

struct MebStats {
  std::size_t iterations = 0;
  bool certified = false;  // dual gap closed within eps
  double lower_bound = 0;  // sqrt(phi), a lower bound on the optimal radius
};

namespace detail {

inline void check_ball_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ConfigError("enclosing-ball tolerance must be positive, got " +
                      std::to_string(eps));
}

// Core solver over `indices` into `points`.
inline Ball meb_indices(const PointSet& points,
                        std::span<const std::size_t> indices, double eps,
                        MebStats* stats) {
  check_ball_eps(eps);
  if (indices.empty())
    throw InputError("minimum enclosing ball of an empty set: " +
                     std::string(violation_name(Violation::kEmpty)));
  const std::size_t n = indices.size();
  const std::size_t dim = points.dim();
  auto pt = [&](std::size_t k) { return points[indices[k]]; };

  Ball ball;
  if (n == 1) {
    auto c = pt(0);
    ball.center.assign(c.begin(), c.end());
    if (stats) *stats = {0, true, 0.0};
    return ball;
  }

  auto farthest_from = [&](Coords q) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = squared_distance_unchecked(pt(k), q);
      if (d > best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };

  std::vector<double> u(n, 0.0);
  const std::size_t alpha = farthest_from(pt(0));
  const std::size_t beta = farthest_from(pt(alpha));
  u[alpha] = 0.5;
  u[beta] += 0.5;

  std::vector<double> c(dim), dist2(n);
  auto recompute = [&] {
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (u[k] == 0.0) continue;
      auto p = pt(k);
      for (std::size_t d = 0; d < dim; ++d) c[d] += u[k] * p[d];
    }
    double phi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      dist2[k] = squared_distance_unchecked(pt(k), c);
      phi += u[k] * dist2[k];
    }
    return phi;
  };

  const double target = (1.0 + eps) * (1.0 + eps) - 1.0;
  const std::size_t max_iter = 200000 + 50 * n;
  double phi = recompute();
  MebStats st;
  for (; st.iterations < max_iter; ++st.iterations) {
    std::size_t far = 0, near = n;
    for (std::size_t k = 1; k < n; ++k)
      if (dist2[k] > dist2[far]) far = k;
    for (std::size_t k = 0; k < n; ++k)
      if (u[k] > 0.0 && (near == n || dist2[k] < dist2[near])) near = k;
    if (!(phi > 0.0)) break;
    const double up = dist2[far] / phi - 1.0;
    const double down = 1.0 - dist2[near] / phi;
    if (up <= target) {
      st.certified = true;
      break;
    }
    if (up >= down) {
      const double lambda = up / (2.0 * (1.0 + up));
      for (auto& w : u) w *= (1.0 - lambda);
      u[far] += lambda;
    } else {
      double lambda = down / (2.0 * (1.0 - down));
      const double drop = u[near] / (1.0 - u[near]);
      const bool remove = drop <= lambda;
      if (remove) lambda = drop;
      for (auto& w : u) w *= (1.0 + lambda);
      u[near] = remove ? 0.0 : u[near] - lambda;
    }
    phi = recompute();
  }

  double r2 = 0.0;
  for (double d : dist2) r2 = std::max(r2, d);
  ball.center = std::move(c);
  ball.radius = std::sqrt(r2);
  st.lower_bound = std::sqrt(std::max(phi, 0.0));
  if (stats) *stats = st;
  return ball;
}

}  // namespace detail

/// Approximate minimum enclosing ball of `s`: contains every point and has
/// radius at most (1+eps) times the optimum whenever `stats->certified`.
/// Deterministic for a fixed input ordering.
inline Ball min_enclosing_ball(const PointSet& s, double eps = kDefaultBallEps,
                               MebStats* stats = nullptr) {
  std::vector<std::size_t> idx(s.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return detail::meb_indices(s, idx, eps, stats);
}

inline Ball min_enclosing_ball(const PointSet& s,
                               std::span<const std::size_t> indices,
                               double eps = kDefaultBallEps,
                               MebStats* stats = nullptr) {
  return detail::meb_indices(s, indices, eps, stats);
}

}  // namespace wspdfuse
