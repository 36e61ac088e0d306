#pragma once

// Power-weighted shortest-path distances. Edges are restricted to a
// Euclidean k-nearest-neighbor candidate graph; Dijkstra stops as soon as the
// requested number of vertices has been settled.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <thread>
#include <utility>
#include <vector>

#include "wspdfuse/geometry.hpp"

namespace wspdfuse {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PathParams {
  double power = 2.0;        // exponent applied to each Euclidean edge length
  std::size_t num_neighbors = 2;  // K returned per query
  std::size_t k_prune = 0;   // candidate edges per vertex; 0 means "same as K"

  std::size_t effective_k_prune() const noexcept {
    return k_prune == 0 ? num_neighbors : k_prune;
  }

  // Checks the parameters against a point count n.
  void validate(std::size_t n) const {
    check_power(power);
    if (num_neighbors < 1)
      throw ConfigError("number of neighbors must be >= 1");
    if (n >= 2 && num_neighbors > n - 1)
      throw ConfigError("number of neighbors " + std::to_string(num_neighbors) +
                        " exceeds N - 1 = " + std::to_string(n - 1));
  }
};

struct Edge {
  std::size_t to = 0;
  double weight = 0.0;  // power distance
};

struct KnnEntry {
  std::size_t index = 0;
  double distance = 0.0;  // Euclidean
};

/// Exact Euclidean kNN lists plus the undirected relaxation graph built from
/// their union.
struct CandidateGraph {
  std::size_t k_prune = 0;      // after clamping
  bool clamped = false;         // requested k_prune was >= N
  double power = 1.0;
  std::vector<std::vector<KnnEntry>> knn;    // sorted by (distance, index)
  std::vector<std::vector<Edge>> adjacency;  // sorted by (weight, to)

  std::size_t size() const noexcept { return knn.size(); }
  std::size_t edge_count() const noexcept {
    std::size_t e = 0;
    for (const auto& a : adjacency) e += a.size();
    return e / 2;
  }
};

inline CandidateGraph build_candidate_graph(const PointSet& points, std::size_t k_prune,
                                            double power) {
  check_power(power);
  if (k_prune < 1) throw ConfigError("k_prune must be >= 1");
  const std::size_t n = points.size();
  CandidateGraph g;
  g.power = power;
  g.k_prune = k_prune;
  if (n >= 1 && k_prune > n - 1) {
    g.k_prune = n - 1;
    g.clamped = true;
  }
  g.knn.resize(n);
  g.adjacency.resize(n);

  std::vector<std::pair<double, std::size_t>> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.emplace_back(detail::squared_distance_unchecked(points[i], points[j]), j);
    const auto k = g.k_prune;
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    g.knn[i].reserve(k);
    for (std::size_t r = 0; r < k; ++r)
      g.knn[i].push_back(KnnEntry{row[r].second, std::sqrt(row[r].first)});
  }

  // Undirected closure: u-v is an edge if either endpoint lists the other.
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : g.knn[i]) {
      nbrs[i].push_back(e.index);
      nbrs[e.index].push_back(i);
    }
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = nbrs[i];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    auto& adj = g.adjacency[i];
    adj.reserve(v.size());
    for (std::size_t j : v) adj.push_back(Edge{j, power_distance(points[i], points[j], power)});
    std::sort(adj.begin(), adj.end(), [](const Edge& a, const Edge& b) {
      return a.weight != b.weight ? a.weight < b.weight : a.to < b.to;
    });
  }
  return g;
}

struct PathNeighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

struct PathKnnResult {
  std::size_t source = 0;
  std::vector<PathNeighbor> neighbors;  // ascending by (distance, index)
  bool exhausted = false;  // fewer than K vertices reachable
};

/// Dijkstra from `source` over the candidate graph, stopping after
/// `num_neighbors` vertices other than the source are settled. Equal
/// tentative distances settle in vertex-index order.
inline PathKnnResult pwspm_knn(const CandidateGraph& g, std::size_t source,
                               std::size_t num_neighbors) {
  const std::size_t n = g.size();
  if (source >= n) throw InputError("source vertex " + std::to_string(source) + " out of range");
  PathKnnResult res;
  res.source = source;
  res.neighbors.reserve(std::min(num_neighbors, n));

  std::vector<double> dist(n, kInf);
  std::vector<char> settled(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty() && res.neighbors.size() < num_neighbors) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u != source) res.neighbors.push_back(PathNeighbor{u, d});
    for (const auto& e : g.adjacency[u]) {
      const double nd = d + e.weight;
      if (!settled[e.to] && nd < dist[e.to]) {
        dist[e.to] = nd;
        heap.emplace(nd, e.to);
      }
    }
  }
  res.exhausted = res.neighbors.size() < num_neighbors;
  return res;
}

inline PathKnnResult pwspm_knn(const CandidateGraph& g, std::size_t source,
                               const PathParams& params) {
  params.validate(g.size());
  return pwspm_knn(g, source, params.num_neighbors);
}

/// Dense symmetric N x N matrix, row-major.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> data;
  bool disconnected = false;  // some entry is +infinity

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// All-pairs path distances: one full Dijkstra per source. Round-off can make
/// the two directions of a path differ in the last bit; the smaller value is
/// kept so the matrix is exactly symmetric. Rows are independent, so the
/// result does not depend on `threads`.
inline DistanceMatrix pwspm_all_pairs(const CandidateGraph& g, unsigned threads = 1) {
  const std::size_t n = g.size();
  DistanceMatrix m(n);
  std::fill(m.data.begin(), m.data.end(), kInf);
  auto fill_row = [&](std::size_t i) {
    m(i, i) = 0.0;
    for (const auto& nb : pwspm_knn(g, i, n == 0 ? 0 : n - 1).neighbors)
      m(i, nb.index) = nb.distance;
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) fill_row(i);
      });
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::min(m(i, j), m(j, i));
      m(i, j) = m(j, i) = v;
      if (v == kInf) m.disconnected = true;
    }
  return m;
}

}  // namespace wspdfuse
