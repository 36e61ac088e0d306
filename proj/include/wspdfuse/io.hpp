#pragma once

// File formats: points CSV, tree JSON, pair JSON lines, KNN / label /
// projection CSVs, fusion and timing reports, and key = value experiment
// configs.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wspdfuse/bench.hpp"
#include "wspdfuse/pipeline.hpp"

namespace wspdfuse::io {

using json = nlohmann::ordered_json;

// Shortest form that round-trips.
inline std::string fmt(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view text, const std::string& what) {
  text = trim(text);
  double v = 0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InputError(what + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

inline std::uint64_t parse_uint(std::string_view text, const std::string& what) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InputError(what + ": cannot parse '" + std::string(text) + "' as a non-negative integer");
  return v;
}

/// Writes through a sibling temporary file and renames it into place, so a
/// failed write never leaves a partial `path` behind.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + tmp.string() + "' for writing");
    try {
      body(out);
      out.flush();
      if (!out) throw InputError("write to '" + tmp.string() + "' failed");
    } catch (...) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into '" + path.string() + "'");
  }
}

// ---------------------------------------------------------------------------
// Points CSV: '#' comment lines carry metadata, then one point per row.

inline void write_points_csv(std::ostream& out, const PointSet& pts,
                             const std::optional<DistributionSpec>& spec = std::nullopt) {
  out << "# wspdfuse points\n# dim=" << pts.dim() << "\n# count=" << pts.size() << "\n";
  if (spec) out << "# seed=" << spec->seed << "\n# dist=" << spec->describe() << "\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto p = pts[i];
    for (std::size_t d = 0; d < p.size(); ++d) out << (d ? "," : "") << fmt(p[d]);
    out << "\n";
  }
}

inline PointSet read_points_csv(std::istream& in) {
  std::vector<double> flat;
  std::size_t dim = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t cols = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      auto cell = t.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      flat.push_back(parse_double(cell, "line " + std::to_string(line_no)));
      ++cols;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim == 0) dim = cols;
    else if (cols != dim)
      throw InputError("line " + std::to_string(line_no) + ": dimension mismatch, expected " +
                       std::to_string(dim) + " coordinates, found " + std::to_string(cols));
  }
  if (dim == 0) throw InputError("invalid point set: " + std::string(violation_name(Violation::kEmpty)));
  return make_point_set(std::move(flat), dim);
}

inline PointSet read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_points_csv(in);
}

// ---------------------------------------------------------------------------
// Tree JSON.

inline json vec_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline json tree_to_json(const SplitTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes()) {
    const Ball& b = t.ball(n.id);
    json node;
    node["id"] = n.id;
    node["parent"] = n.parent == kNoNode ? json(nullptr) : json(n.parent);
    node["left"] = n.is_leaf() ? json(nullptr) : json(n.left);
    node["right"] = n.is_leaf() ? json(nullptr) : json(n.right);
    node["depth"] = n.depth;
    auto idx = t.indices(n);
    node["points"] = std::vector<std::size_t>(idx.begin(), idx.end());
    node["center"] = vec_json(b.center);
    node["radius"] = b.radius;
    nodes.push_back(std::move(node));
  }
  json root;
  root["dim"] = t.source().dim();
  root["point_count"] = t.source().size();
  root["ball_eps"] = t.ball_eps();
  root["node_count"] = t.node_count();
  root["nodes"] = std::move(nodes);
  return root;
}

// ---------------------------------------------------------------------------
// Realization as JSON lines, one pair per line.

inline json pair_to_json(const Realization& r, std::size_t pair_id) {
  const auto& p = r.pairs[pair_id];
  json j;
  j["pair_id"] = pair_id;
  j["node_a_id"] = p.node_a;
  j["node_b_id"] = p.node_b;
  j["size_a"] = r.size_a(p);
  j["size_b"] = r.size_b(p);
  j["gap"] = p.gap;
  j["max_radius"] = p.max_radius;
  j["s"] = r.s;
  return j;
}

inline void write_pairs_jsonl(std::ostream& out, const Realization& r) {
  for (std::size_t i = 0; i < r.pairs.size(); ++i) out << pair_to_json(r, i).dump() << "\n";
}

inline json realization_summary(const Realization& r) {
  json j;
  j["s"] = r.s;
  j["pair_count"] = r.pairs.size();
  if (!r.pairs.empty()) {
    const auto& lp = largest_pair(r);
    j["largest_pair"] = {{"node_a_id", lp.node_a},
                         {"node_b_id", lp.node_b},
                         {"size_a", r.size_a(lp)},
                         {"size_b", r.size_b(lp)},
                         {"gap", lp.gap},
                         {"max_radius", lp.max_radius}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// KNN / labels / projection CSVs. `ids` maps local indices to the ids written
// out (original point indices); empty means identity.

inline std::size_t map_id(const std::vector<std::size_t>& ids, std::size_t i) {
  return ids.empty() ? i : ids[i];
}

inline void write_knn_csv(std::ostream& out, const std::vector<PathKnnResult>& rows,
                          const std::vector<std::size_t>& ids = {}) {
  out << "source_index,rank,neighbor_index,path_distance\n";
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.neighbors.size(); ++k)
      out << map_id(ids, r.source) << "," << (k + 1) << "," << map_id(ids, r.neighbors[k].index)
          << "," << fmt(r.neighbors[k].distance) << "\n";
}

inline void write_labels_csv(std::ostream& out, const ClusterAssignment& c,
                             const std::vector<std::size_t>& ids = {}) {
  out << "point_index,cluster_id\n";
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    out << map_id(ids, i) << "," << c.labels[i] << "\n";
}

// First two coordinates of each point, for 2-D plots of any dimension.
inline void write_projection_csv(std::ostream& out, const PointSet& pts,
                                 const std::vector<std::size_t>& labels,
                                 const std::vector<std::size_t>& ids = {},
                                 const std::vector<int>& side = {}) {
  out << "point_index,x0,x1,cluster_id" << (side.empty() ? "" : ",pair_side") << "\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << map_id(ids, i) << "," << fmt(pts[i][0]) << "," << fmt(pts[i][1]) << ","
        << (labels.empty() ? 0 : labels[i]);
    if (!side.empty()) out << "," << side[i];
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Reports.

inline json config_to_json(const FusionConfig& c) {
  json j;
  j["label"] = c.label;
  j["count"] = c.data.count;
  j["dim"] = c.data.dim;
  j["dist"] = family_name(c.data.family);
  const auto [na, nb] = family_param_names(c.data.family);
  j[na] = c.data.a;
  if (nb) j[nb] = c.data.b;
  j["seed"] = c.data.seed;
  j["s"] = c.s;
  j["num_clusters"] = c.num_clusters;
  j["num_neighbors"] = c.path.num_neighbors;
  j["power"] = c.path.power;
  j["k_prune"] = c.path.effective_k_prune();
  j["ball_eps"] = c.ball_eps;
  j["max_iter"] = c.max_iter;
  return j;
}

inline json fusion_report(const FusionResult& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["config_hash"] = config_hash(r.config);
  j["generated_points"] = r.points.size();
  j["tree_nodes"] = r.tree->node_count();
  j["tree_depth"] = r.tree->depth();
  j["realization"] = realization_summary(r.realization);
  j["selected"] = {{"node_a_id", r.selected.node_a},
                   {"node_b_id", r.selected.node_b},
                   {"size_a", r.size_a},
                   {"size_b", r.size_b},
                   {"total", r.selected_indices.size()},
                   {"gap", r.selected.gap},
                   {"max_radius", r.selected.max_radius},
                   {"pooling", "union of both sets clustered together"}};
  std::size_t exhausted = 0;
  for (const auto& k : r.path.knn) exhausted += k.exhausted ? 1 : 0;
  j["path"] = {{"k_prune", r.path.graph.k_prune},
               {"k_prune_clamped", r.path.graph.clamped},
               {"candidate_edges", r.path.graph.edge_count()},
               {"knn_exhausted_sources", exhausted},
               {"matrix_disconnected", r.path.distances.disconnected}};
  json cl;
  cl["num_clusters"] = r.path.clusters.medoids.size();
  std::vector<std::size_t> medoids;
  for (std::size_t m : r.path.clusters.medoids) medoids.push_back(r.selected_indices[m]);
  cl["medoids"] = medoids;
  std::vector<std::size_t> sizes(r.path.clusters.medoids.size(), 0);
  for (std::size_t l : r.path.clusters.labels) ++sizes[l];
  cl["sizes"] = sizes;
  cl["inertia"] = r.path.clusters.inertia;
  cl["iterations"] = r.path.clusters.iterations;
  j["clusters"] = cl;
  json t = json::object();
  for (const auto& st : r.timings) t[st.stage] = st.seconds;
  j["stage_seconds"] = t;
  return j;
}

inline json timing_to_json(const TimingReport& t) {
  return json{{"config_label", t.config_label},
              {"config_hash", t.config_hash},
              {"iterations", t.iterations},
              {"full_points", t.full_points},
              {"pruned_points", t.pruned_points},
              {"mean_full_seconds", t.mean_full_seconds},
              {"mean_pruned_seconds", t.mean_pruned_seconds},
              {"wspd_build_seconds", t.wspd_build_seconds},
              {"speedup", t.speedup}};
}

inline std::string timing_table(const std::vector<TimingReport>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-16s %6s %12s %12s %10s %12s\n", "config", "hash",
                "iters", "full (s)", "pruned (s)", "speedup", "wspd (s)");
  os << line << std::string(102, '-') << "\n";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-28s %-16s %6zu %12.6f %12.6f %10.2f %12.6f\n",
                  r.config_label.substr(0, 28).c_str(), r.config_hash.c_str(), r.iterations,
                  r.mean_full_seconds, r.mean_pruned_seconds, r.speedup, r.wspd_build_seconds);
    os << line;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Experiment config: `key = value` lines, '#' comments, optional quotes.

struct ExperimentConfig {
  FusionConfig fusion;
  std::size_t iterations = 100;
};

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(t.substr(0, eq)));
    auto value = trim(t.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string_view::npos)
      value = trim(value.substr(0, hash));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, std::string(value)).second)
      throw ConfigError("config key '" + key + "' repeated");
  }
  return kv;
}

/// Applies `kv` on top of `base`. Unknown keys and parameters that do not
/// belong to the chosen family are rejected.
inline ExperimentConfig apply_config(const std::map<std::string, std::string>& kv,
                                     ExperimentConfig base = {}) {
  auto& f = base.fusion;
  auto num = [&](const std::string& k) {
    try {
      return parse_double(kv.at(k), "config key '" + k + "'");
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  };
  auto uint = [&](const std::string& k) {
    try {
      return parse_uint(kv.at(k), "config key '" + k + "'");
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  };
  if (auto it = kv.find("dist"); it != kv.end()) f.data.family = parse_family(it->second);
  const auto [na, nb] = family_param_names(f.data.family);
  static const char* const kFamilyKeys[] = {"min", "max", "mean", "stddev", "location",
                                            "scale", "rate", "log_mean", "log_stddev"};
  for (const auto& [k, v] : kv) {
    if (k == "dist") continue;
    if (k == "label") f.label = v;
    else if (k == "count") f.data.count = uint(k);
    else if (k == "dim") f.data.dim = uint(k);
    else if (k == "seed") f.data.seed = uint(k);
    else if (k == "s") f.s = num(k);
    else if (k == "num_clusters") f.num_clusters = uint(k);
    else if (k == "num_neighbors") f.path.num_neighbors = uint(k);
    else if (k == "power") f.path.power = num(k);
    else if (k == "k_prune") f.path.k_prune = uint(k);
    else if (k == "ball_eps") f.ball_eps = num(k);
    else if (k == "max_iter") f.max_iter = uint(k);
    else if (k == "iterations") base.iterations = uint(k);
    else if (k == na) f.data.a = num(k);
    else if (nb && k == nb) f.data.b = num(k);
    else if (std::find(std::begin(kFamilyKeys), std::end(kFamilyKeys), k) != std::end(kFamilyKeys))
      throw ConfigError("config key '" + k + "' does not apply to distribution '" +
                        family_name(f.data.family) + "'");
    else
      throw ConfigError("unknown config key '" + k + "'");
  }
  return base;
}

inline ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  auto cfg = apply_config(parse_key_values(in));
  if (cfg.fusion.label.empty()) cfg.fusion.label = path.stem().string();
  return cfg;
}

}  // namespace wspdfuse::io
