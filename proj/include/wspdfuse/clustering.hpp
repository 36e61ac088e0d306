#pragma once

// k-medoids over a precomputed distance matrix.

#include <cstddef>
#include <limits>
#include <vector>

#include "wspdfuse/error.hpp"
#include "wspdfuse/path_metric.hpp"

namespace wspdfuse {

struct ClusterAssignment {
  std::vector<std::size_t> labels;   // cluster id per point
  std::vector<std::size_t> medoids;  // point index per cluster id
  double inertia = 0.0;              // sum of distances to own medoid
  std::size_t iterations = 0;
  std::vector<double> inertia_history;  // after each assignment step
};

inline constexpr std::size_t kDefaultMaxIter = 100;

/// Deterministic seeding: point 0 first, then repeatedly the point farthest
/// from its nearest chosen medoid (lowest index on ties).
inline std::vector<std::size_t> farthest_point_init(const DistanceMatrix& m, std::size_t k) {
  if (k == 0) throw ConfigError("number of clusters must be >= 1");
  if (k > m.n)
    throw ConfigError("number of clusters " + std::to_string(k) + " exceeds point count " +
                      std::to_string(m.n));
  std::vector<std::size_t> medoids{0};
  std::vector<double> nearest(m.n);
  std::vector<char> chosen(m.n, 0);
  chosen[0] = 1;
  for (std::size_t i = 0; i < m.n; ++i) nearest[i] = m(i, 0);
  while (medoids.size() < k) {
    std::size_t best = m.n;
    for (std::size_t i = 0; i < m.n; ++i)
      if (!chosen[i] && (best == m.n || nearest[i] > nearest[best])) best = i;
    medoids.push_back(best);
    chosen[best] = 1;
    for (std::size_t i = 0; i < m.n; ++i) nearest[i] = std::min(nearest[i], m(i, best));
  }
  return medoids;
}

namespace detail {

// Nearest medoid per point; ties go to the medoid with the lower point index.
// Returns the inertia. Throws when a point cannot reach any medoid.
inline double assign(const DistanceMatrix& m, const std::vector<std::size_t>& medoids,
                     std::vector<std::size_t>& labels) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) {
    std::size_t best = medoids.size();
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      if (best == medoids.size()) {
        best = c;
        continue;
      }
      const double d = m(i, medoids[c]), db = m(i, medoids[best]);
      if (d < db || (d == db && medoids[c] < medoids[best])) best = c;
    }
    if (m(i, medoids[best]) == kInf)
      throw InputError("point " + std::to_string(i) +
                       " is disconnected from every medoid (path distance is infinite); "
                       "increase k_prune or the number of clusters");
    labels[i] = best;
    inertia += m(i, medoids[best]);
  }
  return inertia;
}

}  // namespace detail

/// k-medoids in two phases. Alternation: assign every point to its nearest
/// medoid, then move each medoid to the member minimizing the within-cluster
/// distance sum (lowest index on ties), until the medoids stop changing.
/// Swap: apply the best strictly improving (medoid, non-medoid) exchange
/// until none remains. Alternation alone stalls in local optima on small
/// inputs; the swap phase escapes most of them. Each phase runs at most
/// `max_iter` rounds.
inline ClusterAssignment kmedoids(const DistanceMatrix& m, std::size_t k,
                                  std::size_t max_iter = kDefaultMaxIter) {
  ClusterAssignment out;
  out.medoids = farthest_point_init(m, k);
  out.labels.assign(m.n, 0);
  out.inertia = detail::assign(m, out.medoids, out.labels);
  out.inertia_history.push_back(out.inertia);

  while (out.iterations < max_iter) {
    ++out.iterations;
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < m.n; ++i) members[out.labels[i]].push_back(i);

    auto next = out.medoids;
    for (std::size_t c = 0; c < k; ++c) {
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t cand : members[c]) {
        double cost = 0.0;
        for (std::size_t j : members[c]) cost += m(cand, j);
        if (cost < best_cost) {
          best_cost = cost;
          next[c] = cand;
        }
      }
    }
    if (next == out.medoids) break;
    out.medoids = std::move(next);
    out.inertia = detail::assign(m, out.medoids, out.labels);
    out.inertia_history.push_back(out.inertia);
  }

  std::vector<char> is_medoid(m.n, 0);
  for (std::size_t c : out.medoids) is_medoid[c] = 1;
  auto cost_with = [&](std::size_t slot, std::size_t cand) {
    double cost = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
      double best = m(i, cand);
      for (std::size_t c = 0; c < k; ++c)
        if (c != slot) best = std::min(best, m(i, out.medoids[c]));
      cost += best;
    }
    return cost;
  };
  for (std::size_t round = 0; round < max_iter; ++round) {
    double best_cost = out.inertia;
    std::size_t best_slot = k, best_cand = m.n;
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t x = 0; x < m.n; ++x) {
        if (is_medoid[x]) continue;
        const double cost = cost_with(c, x);
        if (cost < best_cost) {
          best_cost = cost;
          best_slot = c;
          best_cand = x;
        }
      }
    if (best_slot == k) break;
    is_medoid[out.medoids[best_slot]] = 0;
    is_medoid[best_cand] = 1;
    out.medoids[best_slot] = best_cand;
    ++out.iterations;
    out.inertia = detail::assign(m, out.medoids, out.labels);
    out.inertia_history.push_back(out.inertia);
  }
  return out;
}

}  // namespace wspdfuse
