#pragma once

// Fused pipeline: generate -> split tree -> realization -> largest pair ->
// path-metric KNN and k-medoids on that pair's points only.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <exception>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "wspdfuse/clustering.hpp"
#include "wspdfuse/datagen.hpp"
#include "wspdfuse/path_metric.hpp"
#include "wspdfuse/split_tree.hpp"
#include "wspdfuse/wspd.hpp"

namespace wspdfuse {

struct FusionConfig {
  std::string label;
  DistributionSpec data;
  double s = 1.0;
  PathParams path;
  std::size_t num_clusters = 2;
  double ball_eps = kDefaultBallEps;
  std::size_t max_iter = kDefaultMaxIter;

  void validate() const {
    data.validate();
    check_separation(s);
    check_power(path.power);
    detail::check_ball_eps(ball_eps);
    if (path.num_neighbors < 1) throw ConfigError("num_neighbors must be >= 1");
    if (num_clusters < 1) throw ConfigError("num_clusters must be >= 1");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  }
};

/// Output of the path-metric stage on one point set.
struct PathStageResult {
  CandidateGraph graph;
  std::vector<PathKnnResult> knn;  // one per point, in point order
  DistanceMatrix distances;
  ClusterAssignment clusters;
};

/// Candidate graph, K path-nearest neighbors for every point, the all-pairs
/// path matrix and k-medoids over it. This is the part timed by the bench.
inline PathStageResult run_path_stage(const PointSet& points, const PathParams& path,
                                      std::size_t num_clusters,
                                      std::size_t max_iter = kDefaultMaxIter) {
  path.validate(points.size());
  if (num_clusters > points.size())
    throw ConfigError("num_clusters " + std::to_string(num_clusters) + " exceeds point count " +
                      std::to_string(points.size()));
  PathStageResult r;
  r.graph = build_candidate_graph(points, path.effective_k_prune(), path.power);
  r.knn.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    r.knn.push_back(pwspm_knn(r.graph, i, path.num_neighbors));
  r.distances = pwspm_all_pairs(r.graph);
  r.clusters = kmedoids(r.distances, num_clusters, max_iter);
  return r;
}

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct FusionResult {
  FusionConfig config;
  PointSet points;
  std::unique_ptr<SplitTree> tree;  // heap-held so `realization.tree` stays valid on move
  Realization realization;
  WspdPair selected;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  // Original indices of the selected points, ascending; `side[i]` is 0 when
  // selected_indices[i] came from the pair's first node, 1 otherwise.
  std::vector<std::size_t> selected_indices;
  std::vector<int> side;
  PointSet selected_points;
  PathStageResult path;
  std::vector<StageTiming> timings;

  double stage_seconds(const std::string& name) const {
    for (const auto& t : timings)
      if (t.stage == name) return t.seconds;
    return 0.0;
  }
};

namespace detail {

template <class F>
auto timed_stage(std::vector<StageTiming>& timings, const char* name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&] {
    timings.push_back(StageTiming{
        name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto out = f();
      finish();
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

/// Selected pair's points, original indices ascending.
inline std::pair<std::vector<std::size_t>, std::vector<int>> pair_members(const Realization& r,
                                                                          const WspdPair& p) {
  std::vector<std::pair<std::size_t, int>> tagged;
  for (std::size_t i : r.tree->indices(p.node_a)) tagged.emplace_back(i, 0);
  for (std::size_t i : r.tree->indices(p.node_b)) tagged.emplace_back(i, 1);
  std::sort(tagged.begin(), tagged.end());
  std::pair<std::vector<std::size_t>, std::vector<int>> out;
  for (auto [i, side] : tagged) {
    out.first.push_back(i);
    out.second.push_back(side);
  }
  return out;
}

namespace detail {

// Stages 2-6 on res.points.
inline void fuse_points(FusionResult& res) {
  const FusionConfig& cfg = res.config;
  res.tree = timed_stage(res.timings, "tree", [&] {
    return std::make_unique<SplitTree>(res.points, cfg.ball_eps);
  });
  res.realization = timed_stage(res.timings, "realize", [&] { return realize(*res.tree, cfg.s); });
  timed_stage(res.timings, "select", [&] {
    res.selected = largest_pair(res.realization);
    res.size_a = res.realization.size_a(res.selected);
    res.size_b = res.realization.size_b(res.selected);
    auto [idx, side] = pair_members(res.realization, res.selected);
    res.selected_indices = std::move(idx);
    res.side = std::move(side);
    const std::size_t need = cfg.path.num_neighbors + 1;
    if (res.selected_indices.size() < need)
      throw Error("largest well-separated pair has " +
                  std::to_string(res.selected_indices.size()) + " points but num_neighbors=" +
                  std::to_string(cfg.path.num_neighbors) + " needs at least " +
                  std::to_string(need) + "; lower num_neighbors or the separation s");
    if (res.selected_indices.size() < cfg.num_clusters)
      throw Error("largest well-separated pair has fewer points than num_clusters");
    res.selected_points = res.points.subset(res.selected_indices);
  });
  res.path = timed_stage(res.timings, "path", [&] {
    return run_path_stage(res.selected_points, cfg.path, cfg.num_clusters, cfg.max_iter);
  });
}

}  // namespace detail

/// Runs the whole pipeline. Config errors surface before any work; failures
/// inside a stage are rethrown as StageError carrying the stage name.
inline FusionResult run_fusion(const FusionConfig& cfg) {
  cfg.validate();
  FusionResult res;
  res.config = cfg;
  res.points = detail::timed_stage(res.timings, "generate", [&] { return generate(cfg.data); });
  detail::fuse_points(res);
  return res;
}

/// Same pipeline on caller-supplied points; the config's distribution is
/// ignored apart from being echoed.
inline FusionResult run_fusion(const FusionConfig& cfg, PointSet points) {
  cfg.validate();
  if (points.empty()) throw InputError("invalid point set: " + std::string(violation_name(Violation::kEmpty)));
  FusionResult res;
  res.config = cfg;
  res.points = std::move(points);
  detail::fuse_points(res);
  return res;
}

}  // namespace wspdfuse
