// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Diagnostics for failures go to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wspdfuse/io.hpp"
#include "wspdfuse/reference.hpp"
#include "wspdfuse/wspdfuse.hpp"

using namespace wspdfuse;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

PointSet uniform_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, double lo = -1,
                        double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> flat(n * dim);
  for (auto& x : flat) x = u(rng);
  return make_point_set(std::move(flat), dim);
}

double rel_err(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string seconds(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", x);
  return buf;
}

std::string describe_points(const PointSet& s, std::span<const std::size_t> idx) {
  std::ostringstream os;
  for (std::size_t i : idx) {
    os << "    #" << i << " (";
    for (std::size_t d = 0; d < s.dim(); ++d) os << (d ? ", " : "") << fmt(s[i][d]);
    os << ")\n";
  }
  return os.str();
}

// Number of unordered point pairs not covered exactly once.
std::size_t coverage_violations(const Realization& r) {
  const std::size_t n = r.tree->source().size();
  std::vector<unsigned char> count(n * n, 0);
  for (const auto& p : r.pairs)
    for (std::size_t a : r.tree->indices(p.node_a))
      for (std::size_t b : r.tree->indices(p.node_b)) {
        auto& c = count[std::min(a, b) * n + std::max(a, b)];
        if (c < 255) ++c;
      }
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) bad += count[i * n + j] != 1;
  return bad;
}

// Pairs failing the recomputed separation test or the cross-distance bound.
std::size_t certificate_violations(const Realization& r) {
  const SplitTree& t = *r.tree;
  const double eps = t.ball_eps();
  std::size_t bad = 0;
  for (const auto& p : r.pairs) {
    const Ball& a = t.ball(p.node_a);
    const Ball& b = t.ball(p.node_b);
    const double rmax = std::max(a.radius, b.radius);
    const double gap = ball_gap(a, b);
    bool ok = r.s * rmax <= gap + 1e-9 * std::max(1.0, gap);
    const double floor = r.s * rmax - 2 * eps * rmax;
    for (std::size_t i : t.indices(p.node_a))
      for (std::size_t j : t.indices(p.node_b))
        ok = ok && euclidean_distance(t.source()[i], t.source()[j]) >= floor;
    if (!ok) {
      ++bad;
      std::cerr << "  certificate violation: nodes " << p.node_a << "/" << p.node_b
                << " s=" << r.s << " rmax=" << fmt(rmax) << " gap=" << fmt(gap) << "\n";
    }
  }
  return bad;
}

Outcome predicate_example(double ra, double rb, double gap, double s_true) {
  const double boundary = gap / std::max(ra, rb);
  const bool at_s = is_well_separated(ra, rb, gap, s_true);
  const double above = std::nextafter(boundary, INFINITY) * (1 + 1e-12);
  const bool past = is_well_separated(ra, rb, gap, above);
  const bool well_past = is_well_separated(ra, rb, gap, boundary + 0.01);
  const bool below = is_well_separated(ra, rb, gap, boundary * (1 - 1e-12));
  Outcome o;
  o.pass = at_s && !past && !well_past && below;
  o.detail = "s=" + fmt(s_true) + " -> " + (at_s ? "true" : "false") + "; boundary s=" +
             fmt(boundary) + ", above it -> " + (past || well_past ? "true" : "false");
  return o;
}

Outcome coverage_and_certificates(bool want_coverage) {
  std::size_t realizations = 0, violations = 0, pairs = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    for (std::size_t n : {10u, 50u, 200u})
      for (std::size_t dim : {2u, 6u})
        for (double s : {0.25, 1.0, 4.0}) {
          std::mt19937_64 rng(seed * 1000003 + n * 31 + dim);
          auto tree = build_split_tree(uniform_points(rng, n, dim));
          auto r = realize(tree, s);
          ++realizations;
          pairs += r.pairs.size();
          const std::size_t v = want_coverage ? coverage_violations(r) : certificate_violations(r);
          if (v && want_coverage)
            std::cerr << "  coverage violation: seed=" << seed << " N=" << n << " dim=" << dim
                      << " s=" << s << " bad point pairs=" << v << "\n";
          violations += v;
        }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = violations == 0 && (!want_coverage || secs <= 30.0);
  o.detail = std::to_string(realizations) + " realizations, " + std::to_string(pairs) +
             " pairs, " + std::to_string(violations) + " violations, " + seconds(secs);
  return o;
}

Outcome meb_oracle() {
  std::mt19937_64 rng(5005);
  std::size_t bad = 0;
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 2 + t % 2;
    const std::size_t n = 1 + (t * 7) % 20;
    auto s = uniform_points(rng, n, dim, -10, 10);
    const Ball approx = min_enclosing_ball(s);
    const Ball exact = reference::exact_min_enclosing_ball(s);
    bool ok = approx.radius <= exact.radius * (1 + 1e-5);
    for (std::size_t i = 0; i < n; ++i) ok = ok && approx.contains(s[i]);
    if (exact.radius > 0) worst = std::max(worst, approx.radius / exact.radius - 1);
    if (!ok) {
      ++bad;
      std::cerr << "  MEB mismatch: n=" << n << " dim=" << dim << " approx=" << fmt(approx.radius)
                << " exact=" << fmt(exact.radius) << "\n";
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && secs <= 10.0, "200 instances, " + std::to_string(bad) +
                                        " failures, worst ratio 1+" + fmt(worst) + ", " +
                                        seconds(secs)};
}

Outcome dijkstra_oracle() {
  std::mt19937_64 rng(6006);
  std::size_t bad = 0, checked = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t n : {10u, 40u, 100u})
    for (double p : {1.0, 2.0, 3.0}) {
      auto s = uniform_points(rng, n, 3);
      auto g = build_candidate_graph(s, n - 1, p);
      for (std::size_t src = 0; src < n; ++src) {
        const auto want = reference::dense_dijkstra(s, src, p);
        const auto got = pwspm_knn(g, src, n - 1);
        if (got.neighbors.size() != n - 1) ++bad;
        for (const auto& nb : got.neighbors) {
          ++checked;
          if (rel_err(nb.distance, want.dist[nb.index]) > 1e-9) {
            ++bad;
            std::cerr << "  path distance mismatch: N=" << n << " p=" << p << " " << src
                      << "->" << nb.index << " got " << fmt(nb.distance) << " want "
                      << fmt(want.dist[nb.index]) << "\n";
          }
        }
      }
    }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && secs <= 60.0, std::to_string(checked) + " distances, " +
                                        std::to_string(bad) + " mismatches, " +
                                        seconds(secs)};
}

Outcome pruning_monotone() {
  std::mt19937_64 rng(7007);
  std::size_t bad = 0, checked = 0;
  const std::size_t K = 5;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 30 + 5 * t;
    auto s = uniform_points(rng, n, 2 + t % 4);
    const double p = 1.0 + (t % 3);
    std::vector<DistanceMatrix> all;
    std::vector<std::vector<PathKnnResult>> knn;
    for (std::size_t k : {std::size_t{2}, std::size_t{4}, std::size_t{8}, n - 1}) {
      auto g = build_candidate_graph(s, k, p);
      all.push_back(pwspm_all_pairs(g));
      knn.emplace_back();
      for (std::size_t src = 0; src < n; ++src) knn.back().push_back(pwspm_knn(g, src, K));
    }
    for (std::size_t a = 0; a + 1 < all.size(); ++a) {
      for (std::size_t i = 0; i < all[a].data.size(); ++i) {
        ++checked;
        bad += all[a + 1].data[i] > all[a].data[i];
      }
      for (std::size_t src = 0; src < n; ++src) {
        const auto& lo = knn[a][src].neighbors;
        const auto& hi = knn[a + 1][src].neighbors;
        for (std::size_t r = 0; r < hi.size(); ++r) {
          ++checked;
          if (r < lo.size() && hi[r].distance > lo[r].distance) ++bad;
        }
      }
    }
  }
  return {bad == 0, "20 instances, k_prune 2 < 4 < 8 < N-1, " + std::to_string(checked) +
                        " comparisons, " + std::to_string(bad) + " increases"};
}

Outcome unit_power_degeneracy() {
  std::mt19937_64 rng(8008);
  std::size_t bad = 0, checked = 0;
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 20 + 10 * t;
    auto s = uniform_points(rng, n, 2 + t % 5, -100, 100);
    auto m = pwspm_all_pairs(build_candidate_graph(s, n - 1, 1.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        ++checked;
        const double e = rel_err(m(i, j), euclidean_distance(s[i], s[j]));
        worst = std::max(worst, e);
        bad += e > 1e-12;
      }
  }
  return {bad == 0, std::to_string(checked) + " distances, " + std::to_string(bad) +
                        " beyond 1e-12, worst relative error " + fmt(worst)};
}

// Instance for the clustering criterion: path metric over `pts` (complete
// candidate graph, power p).
DistanceMatrix medoid_matrix(const PointSet& pts, double p) {
  return pwspm_all_pairs(build_candidate_graph(pts, pts.size() - 1, p));
}

bool reaches_optimum(const DistanceMatrix& m, double* got = nullptr, double* opt = nullptr) {
  const double g = kmedoids(m, 2).inertia;
  const double o =
      reference::exhaustive_kmedoids_cost(m.n, 2, [&](std::size_t i, std::size_t j) { return m(i, j); });
  if (got) *got = g;
  if (opt) *opt = o;
  return std::abs(g - o) <= 1e-12 * std::max(1.0, o);
}

Outcome kmedoids_optimality() {
  std::mt19937_64 rng(9009);
  std::size_t misses = 0;
  std::size_t threshold = 8;  // largest N at which every shrunk instance holds
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + t % 6;  // 3..8
    const double p = 1.0 + t % 3;
    const auto pts = uniform_points(rng, n, 2);
    double got, opt;
    if (reaches_optimum(medoid_matrix(pts, p), &got, &opt)) continue;
    ++misses;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::cerr << "  k-medoids miss: instance " << t << " N=" << n << " p=" << p
              << " inertia=" << fmt(got) << " optimum=" << fmt(opt) << "\n"
              << describe_points(pts, all);
    // Shrink by dropping trailing points until the property holds.
    std::size_t k = n;
    while (k > 2) {
      --k;
      std::vector<std::size_t> keep(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
      if (reaches_optimum(medoid_matrix(pts.subset(keep), p))) break;
    }
    std::cerr << "    holds after shrinking to N=" << k << "\n";
    threshold = std::min(threshold, k);
  }
  std::string detail = "50 matrices with N<=8, k=2, " + std::to_string(misses) +
                       " below optimum";
  if (misses) detail += "; property holds for N<=" + std::to_string(threshold) + " after shrinking";
  return {misses == 0, detail};
}

struct Golden {
  const char* file;
  const char* dist;
  double a, b;
  const char* a_key;
  const char* b_key;
  std::size_t dim, count;
  double s;
  std::size_t clusters, neighbors;
  double power;
};

const Golden kGolden[] = {
    {"uniform500_r6.toml", "uniform", -500, 500, "min", "max", 6, 500, 4, 2, 4, 6},
    {"gaussian1000_r6.toml", "gaussian", 0, 5, "mean", "stddev", 6, 1000, 0.25, 2, 25, 2},
    {"uniform1000_r10.toml", "uniform", -1000, 1000, "min", "max", 10, 1000, 2, 2, 4, 5},
};

io::ExperimentConfig load_golden(const Golden& g) {
  return io::read_config(fs::path(WSPDFUSE_CONFIG_DIR) / g.file);
}

Outcome golden_configs() {
  std::ostringstream detail;
  bool pass = true;
  for (const auto& g : kGolden) {
    const auto cfg = load_golden(g);
    std::string why;
    try {
      const auto r1 = run_fusion(cfg.fusion);
      const auto r2 = run_fusion(cfg.fusion);
      auto j1 = io::fusion_report(r1), j2 = io::fusion_report(r2);
      j1.erase("stage_seconds");
      j2.erase("stage_seconds");
      if (j1 != j2 || r1.path.clusters.labels != r2.path.clusters.labels) why += " nondeterministic;";
      const auto& c = j1["config"];
      const bool echo = c["dist"] == g.dist && c[g.a_key] == g.a && c[g.b_key] == g.b &&
                        c["dim"] == g.dim && c["count"] == g.count && c["s"] == g.s &&
                        c["num_clusters"] == g.clusters && c["num_neighbors"] == g.neighbors &&
                        c["power"] == g.power;
      if (!echo) why += " echo mismatch " + c.dump() + ";";
      if (coverage_violations(r1.realization)) why += " coverage;";
      if (certificate_violations(r1.realization)) why += " certificates;";
      if (r1.path.clusters.medoids.size() != g.clusters) why += " cluster count;";
      detail << fs::path(g.file).stem().string() << ": " << r1.realization.pairs.size()
             << " pairs, selected " << r1.size_a << "+" << r1.size_b << " points"
             << (why.empty() ? "" : " FAILED:" + why) << "; ";
    } catch (const std::exception& e) {
      why = e.what();
      detail << g.file << ": error " << why << "; ";
    }
    pass = pass && why.empty();
  }
  return {pass, detail.str()};
}

Outcome timing_direction() {
  std::ostringstream detail;
  bool pass = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& g : kGolden) {
    const auto cfg = load_golden(g);
    try {
      const auto rep = bench_compare(cfg.fusion, cfg.iterations);
      const bool ok = rep.mean_pruned_seconds <= rep.mean_full_seconds && rep.speedup >= 1.0;
      pass = pass && ok && rep.iterations == 100;
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s: full %.6f s, pruned %.6f s, speedup %.1fx (%zu iters); ",
                    fs::path(g.file).stem().string().c_str(), rep.mean_full_seconds,
                    rep.mean_pruned_seconds, rep.speedup, rep.iterations);
      detail << buf;
    } catch (const std::exception& e) {
      pass = false;
      detail << g.file << ": error " << e.what() << "; ";
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail << seconds(secs) << " total";
  return {pass && secs <= 300.0, detail.str()};
}

Outcome subset_separation() {
  std::mt19937_64 rng(1212);
  std::size_t pairs_tested = 0, subsets = 0, counterexamples = 0;
  const double s_values[] = {0.5, 1.0, 2.0};
  for (int inst = 0; pairs_tested < 100; ++inst) {
    const double s = s_values[inst % 3];
    auto pts = uniform_points(rng, 150, 2 + inst % 2);
    auto tree = build_split_tree(pts);
    auto r = realize(tree, s);
    std::vector<const WspdPair*> eligible;
    for (const auto& p : r.pairs)
      if (r.size_a(p) >= 2 || r.size_b(p) >= 2) eligible.push_back(&p);
    // Up to five pairs per instance, spread over the emission order.
    const std::size_t take = std::min<std::size_t>({5, eligible.size(), 100 - pairs_tested});
    for (std::size_t k = 0; k < take; ++k) {
      const WspdPair& p = *eligible[k * eligible.size() / take];
      ++pairs_tested;
      bool side_a = r.size_a(p) >= 2 && (r.size_b(p) < 2 || rng() % 2 == 0);
      const std::size_t own = side_a ? p.node_a : p.node_b;
      const std::size_t partner = side_a ? p.node_b : p.node_a;
      auto members = tree.indices(own);
      std::vector<std::size_t> pool(members.begin(), members.end());
      const Ball fresh_partner = min_enclosing_ball(pts, tree.indices(partner), tree.ball_eps());
      for (int rep = 0; rep < 10; ++rep) {
        ++subsets;
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t m = 1 + rng() % pool.size();
        std::vector<std::size_t> sub(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(sub.begin(), sub.end());
        const Ball sb = min_enclosing_ball(pts, sub, tree.ball_eps());
        const double gap = ball_gap(sb, fresh_partner);
        const double need = s * std::max(sb.radius, fresh_partner.radius);
        if (need <= gap + 1e-9 * std::max(1.0, gap)) continue;
        ++counterexamples;
        std::cerr << "  subset separation counterexample: instance " << inst << " s=" << s
                  << " pair (" << p.node_a << ", " << p.node_b << ")\n"
                  << "    subset radius " << fmt(sb.radius) << " partner radius "
                  << fmt(fresh_partner.radius) << " gap " << fmt(gap) << " needed " << fmt(need) << "\n"
                  << "    subset points:\n" << describe_points(pts, sub)
                  << "    partner points:\n" << describe_points(pts, tree.indices(partner));
      }
    }
  }
  return {counterexamples == 0, std::to_string(pairs_tested) + " pairs x 10 subsets (" +
                                    std::to_string(subsets) + "), " +
                                    std::to_string(counterexamples) + " counterexamples"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"separation predicate, radii 3.2153/3.0909, gap 10.7448",
       [] { return predicate_example(3.2153, 3.0909, 10.7448, 1.5); }},
      {"separation predicate, radii 11.8761/18.603, gap 57.7499",
       [] { return predicate_example(11.8761, 18.603, 57.7499, 1.0); }},
      {"pair coverage", [] { return coverage_and_certificates(true); }},
      {"pair certificates", [] { return coverage_and_certificates(false); }},
      {"enclosing ball vs exhaustive oracle", meb_oracle},
      {"pruned Dijkstra vs full-graph oracle", dijkstra_oracle},
      {"pruning monotonicity", pruning_monotone},
      {"unit power degeneracy", unit_power_degeneracy},
      {"k-medoids small-instance optimality", kmedoids_optimality},
      {"golden configs end to end", golden_configs},
      {"pruned timing direction", timing_direction},
      {"subset separation", subset_separation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
