// wspdfuse command-line front end.
//
//   generate  points CSV from a seeded distribution
//   tree      split tree as JSON
//   wspd      well-separated pairs as JSON lines (+ summary on stderr)
//   knn       path-metric K nearest neighbors as CSV
//   cluster   k-medoids labels as CSV
//   fuse      full pipeline report
//   bench     full vs pruned timing comparison
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wspdfuse/io.hpp"
#include "wspdfuse/reference.hpp"
#include "wspdfuse/wspdfuse.hpp"

namespace fs = std::filesystem;
using namespace wspdfuse;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

// Experiment parameters shared by generate / fuse / bench. Every flag maps to
// the config-file key of the same name (dashes become underscores).
struct ParamFlags {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::vector<std::string>& keys) {
    for (const auto& key : keys) {
      std::string flag = "--" + key;
      for (auto& c : flag)
        if (c == '_') c = '-';
      app->add_option_function<std::string>(
          flag, [this, key](const std::string& v) { values[key] = v; },
          "sets '" + key + "'");
    }
  }
};

const std::vector<std::string> kDataKeys = {"dist",     "count",      "dim",      "seed",
                                            "min",      "max",        "mean",     "stddev",
                                            "location", "scale",      "rate",     "log_mean",
                                            "log_stddev"};
const std::vector<std::string> kRunKeys = {"label",        "s",          "num_clusters",
                                           "num_neighbors", "power",     "k_prune",
                                           "ball_eps",     "max_iter",   "iterations"};

io::ExperimentConfig resolve(const std::string& config_path,
                             const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config '" + config_path + "'");
    kv = io::parse_key_values(in);
  }
  // Switching family on the command line drops the file's family parameters.
  if (overrides.count("dist"))
    for (const char* k : {"min", "max", "mean", "stddev", "location", "scale", "rate",
                          "log_mean", "log_stddev"})
      kv.erase(k);
  for (const auto& [k, v] : overrides) kv[k] = v;
  auto cfg = io::apply_config(kv);
  if (cfg.fusion.label.empty() && !config_path.empty())
    cfg.fusion.label = fs::path(config_path).stem().string();
  return cfg;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
  } else {
    io::write_file_atomic(path, body);
  }
}

std::size_t parse_k_prune(const std::string& text, std::size_t n) {
  if (text.empty()) return 0;
  if (text == "N-1" || text == "n-1" || text == "all") return n == 0 ? 0 : n - 1;
  return io::parse_uint(text, "--k-prune");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Well-separated pair decomposition preprocessing for power-weighted path clustering"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a seeded synthetic point set as CSV");
  ParamFlags gen_flags;
  gen_flags.add(gen, kDataKeys);
  std::string gen_out;
  gen->add_option("-o,--output", gen_out, "points CSV (default stdout)");

  // tree
  auto* tree = app.add_subcommand("tree", "build the split tree and dump it as JSON");
  std::string tree_in, tree_out;
  double tree_eps = kDefaultBallEps;
  tree->add_option("-i,--input", tree_in, "points CSV")->required();
  tree->add_option("-o,--output", tree_out, "tree JSON (default stdout)");
  tree->add_option("--ball-eps", tree_eps, "enclosing-ball tolerance");

  // wspd
  auto* wsp = app.add_subcommand("wspd", "realize the s-well-separated pairs");
  std::string wsp_in, wsp_out, wsp_summary;
  double wsp_s = 1.0, wsp_eps = kDefaultBallEps;
  wsp->add_option("-i,--input", wsp_in, "points CSV")->required();
  wsp->add_option("--s", wsp_s, "separation parameter")->required();
  wsp->add_option("-o,--output", wsp_out, "pairs JSON lines (default stdout)");
  wsp->add_option("--summary", wsp_summary, "summary JSON path (default stderr)");
  wsp->add_option("--ball-eps", wsp_eps, "enclosing-ball tolerance");

  // knn
  auto* knn = app.add_subcommand("knn", "power-weighted path K nearest neighbors");
  std::string knn_in, knn_out, knn_kprune;
  std::size_t knn_k = 2;
  double knn_p = 2.0;
  bool knn_oracle = false;
  knn->add_option("-i,--input", knn_in, "points CSV")->required();
  knn->add_option("--num-neighbors", knn_k, "K neighbors per source")->required();
  knn->add_option("--k-prune", knn_kprune, "candidate edges per vertex, integer or N-1 (default K)");
  knn->add_option("--power", knn_p, "power weighting p >= 1");
  knn->add_flag("--oracle", knn_oracle, "use textbook full-graph Dijkstra instead");
  knn->add_option("-o,--output", knn_out, "KNN CSV (default stdout)");

  // cluster
  auto* clu = app.add_subcommand("cluster", "k-medoids over the path-distance matrix");
  std::string clu_in, clu_out, clu_proj, clu_kprune;
  std::size_t clu_k = 2, clu_iter = kDefaultMaxIter;
  double clu_p = 2.0;
  clu->add_option("-i,--input", clu_in, "points CSV")->required();
  clu->add_option("--num-clusters", clu_k, "number of clusters")->required();
  clu->add_option("--k-prune", clu_kprune, "candidate edges per vertex, integer or N-1")->required();
  clu->add_option("--power", clu_p, "power weighting p >= 1");
  clu->add_option("--max-iter", clu_iter, "k-medoids round limit");
  clu->add_option("-o,--output", clu_out, "labels CSV (default stdout)");
  clu->add_option("--projection", clu_proj, "2-D projection CSV for plotting");

  // fuse
  auto* fuse = app.add_subcommand("fuse", "run the full pipeline and write a report");
  std::string fuse_cfg, fuse_dir;
  ParamFlags fuse_flags;
  fuse->add_option("-c,--config", fuse_cfg, "experiment config (key = value)");
  fuse->add_option("-d,--output-dir", fuse_dir,
                   "directory for report.json, points.csv, knn.csv, labels.csv, projection.csv");
  fuse_flags.add(fuse, kDataKeys);
  fuse_flags.add(fuse, kRunKeys);

  // bench
  auto* bench = app.add_subcommand("bench", "time path clustering on full vs pruned data");
  std::vector<std::string> bench_cfgs;
  std::string bench_out;
  ParamFlags bench_flags;
  bench->add_option("-c,--config", bench_cfgs, "experiment config(s)")->required();
  bench->add_option("-o,--output", bench_out, "timing JSON path");
  bench_flags.add(bench, {"iterations", "seed"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*gen) {
      auto cfg = resolve("", gen_flags.values);
      const auto pts = generate(cfg.fusion.data);
      emit(gen_out, [&](std::ostream& o) { io::write_points_csv(o, pts, cfg.fusion.data); });
    } else if (*tree) {
      const auto t = build_split_tree(io::read_points_csv(tree_in), tree_eps);
      const auto j = io::tree_to_json(t);
      emit(tree_out, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
    } else if (*wsp) {
      check_separation(wsp_s);
      const auto t = build_split_tree(io::read_points_csv(wsp_in), wsp_eps);
      const auto r = realize(t, wsp_s);
      emit(wsp_out, [&](std::ostream& o) { io::write_pairs_jsonl(o, r); });
      auto summary = io::realization_summary(r);
      summary["point_count"] = t.source().size();
      if (wsp_summary.empty())
        std::cerr << summary.dump() << "\n";
      else
        emit(wsp_summary, [&](std::ostream& o) { o << summary.dump(2) << "\n"; });
    } else if (*knn) {
      const auto pts = io::read_points_csv(knn_in);
      PathParams params{knn_p, knn_k, 0};
      params.validate(pts.size());
      std::vector<PathKnnResult> rows;
      if (knn_oracle) {
        for (std::size_t src = 0; src < pts.size(); ++src) {
          const auto d = reference::dense_dijkstra(pts, src, knn_p);
          PathKnnResult r;
          r.source = src;
          for (std::size_t v : d.order)
            if (v != src && r.neighbors.size() < knn_k) r.neighbors.push_back({v, d.dist[v]});
          rows.push_back(std::move(r));
        }
      } else {
        params.k_prune = parse_k_prune(knn_kprune, pts.size());
        const auto g = build_candidate_graph(pts, params.effective_k_prune(), knn_p);
        if (g.clamped)
          std::cerr << "warning: k_prune clamped to N-1 = " << g.k_prune << "\n";
        std::size_t exhausted = 0;
        for (std::size_t src = 0; src < pts.size(); ++src) {
          rows.push_back(pwspm_knn(g, src, knn_k));
          exhausted += rows.back().exhausted ? 1 : 0;
        }
        if (exhausted)
          std::cerr << "warning: " << exhausted
                    << " sources reached fewer than K vertices (candidate graph disconnected)\n";
      }
      emit(knn_out, [&](std::ostream& o) { io::write_knn_csv(o, rows); });
    } else if (*clu) {
      const auto pts = io::read_points_csv(clu_in);
      const std::size_t kp = parse_k_prune(clu_kprune, pts.size());
      const auto g = build_candidate_graph(pts, kp, clu_p);
      if (g.clamped) std::cerr << "warning: k_prune clamped to N-1 = " << g.k_prune << "\n";
      const auto c = kmedoids(pwspm_all_pairs(g), clu_k, clu_iter);
      emit(clu_out, [&](std::ostream& o) { io::write_labels_csv(o, c); });
      if (!clu_proj.empty())
        emit(clu_proj, [&](std::ostream& o) { io::write_projection_csv(o, pts, c.labels); });
    } else if (*fuse) {
      if (fuse_cfg.empty() && fuse_flags.values.empty())
        throw ConfigError("fuse needs --config or explicit parameters");
      const auto cfg = resolve(fuse_cfg, fuse_flags.values);
      const auto res = run_fusion(cfg.fusion);
      const auto report = io::fusion_report(res);
      if (!fuse_dir.empty()) {
        fs::create_directories(fuse_dir);
        const fs::path dir(fuse_dir);
        io::write_file_atomic(dir / "points.csv", [&](std::ostream& o) {
          io::write_points_csv(o, res.points, cfg.fusion.data);
        });
        io::write_file_atomic(dir / "knn.csv", [&](std::ostream& o) {
          io::write_knn_csv(o, res.path.knn, res.selected_indices);
        });
        io::write_file_atomic(dir / "labels.csv", [&](std::ostream& o) {
          io::write_labels_csv(o, res.path.clusters, res.selected_indices);
        });
        io::write_file_atomic(dir / "projection.csv", [&](std::ostream& o) {
          io::write_projection_csv(o, res.selected_points, res.path.clusters.labels,
                                   res.selected_indices, res.side);
        });
        io::write_file_atomic(dir / "report.json",
                              [&](std::ostream& o) { o << report.dump(2) << "\n"; });
      }
      std::cout << report.dump(2) << "\n";
    } else if (*bench) {
      std::vector<TimingReport> rows;
      for (const auto& path : bench_cfgs) {
        const auto cfg = resolve(path, bench_flags.values);
        rows.push_back(bench_compare(cfg.fusion, cfg.iterations));
      }
      std::cout << io::timing_table(rows);
      if (!bench_out.empty()) {
        io::json j = io::json::array();
        for (const auto& r : rows) j.push_back(io::timing_to_json(r));
        emit(bench_out, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "error: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
