#pragma once

// Timing harness: the path-metric stage on the full data versus on the
// points of the largest well-separated pair.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

#include "wspdfuse/pipeline.hpp"

namespace wspdfuse {

struct TimingReport {
  std::string config_label;
  std::string config_hash;  // distinguishes rows that share a label
  std::size_t iterations = 0;
  std::size_t full_points = 0;
  std::size_t pruned_points = 0;
  double mean_full_seconds = 0.0;
  double mean_pruned_seconds = 0.0;
  double wspd_build_seconds = 0.0;  // tree + realization, excluded from the means
  double speedup = 0.0;             // mean_full / mean_pruned
};

// Canonical one-line rendering of every result-affecting parameter.
inline std::string canonical_config(const FusionConfig& cfg) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "s=%.17g power=%.17g K=%zu k_prune=%zu clusters=%zu eps=%.17g",
                cfg.s, cfg.path.power, cfg.path.num_neighbors, cfg.path.effective_k_prune(),
                cfg.num_clusters, cfg.ball_eps);
  return cfg.data.describe() + " " + buf;
}

// 64-bit FNV-1a, hex.
inline std::string config_hash(const FusionConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_config(cfg)) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

// Mean seconds of `iterations` runs after one untimed warm-up run.
inline double time_path_stage(const PointSet& points, const FusionConfig& cfg,
                              std::size_t iterations) {
  volatile double sink = run_path_stage(points, cfg.path, cfg.num_clusters, cfg.max_iter)
                             .clusters.inertia;
  double total = 0.0;
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_path_stage(points, cfg.path, cfg.num_clusters, cfg.max_iter);
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink = sink + r.clusters.inertia;
  }
  (void)sink;
  return total / static_cast<double>(iterations);
}

}  // namespace detail

/// Both arms rebuild everything from the same immutable input points on
/// every iteration; nothing else is shared between them.
inline TimingReport bench_compare(const FusionConfig& cfg, std::size_t iterations) {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  const FusionResult fused = run_fusion(cfg);

  TimingReport rep;
  rep.config_label = cfg.label.empty() ? config_hash(cfg) : cfg.label;
  rep.config_hash = config_hash(cfg);
  rep.iterations = iterations;
  rep.full_points = fused.points.size();
  rep.pruned_points = fused.selected_points.size();
  rep.wspd_build_seconds = fused.stage_seconds("tree") + fused.stage_seconds("realize");
  try {
    rep.mean_full_seconds = detail::time_path_stage(fused.points, cfg, iterations);
  } catch (const std::exception& e) {
    throw StageError("bench-full", e.what());
  }
  rep.mean_pruned_seconds = detail::time_path_stage(fused.selected_points, cfg, iterations);
  rep.speedup = rep.mean_full_seconds / rep.mean_pruned_seconds;
  return rep;
}

}  // namespace wspdfuse
