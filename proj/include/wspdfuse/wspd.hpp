#pragma once

// Well-separated pair decomposition over a SplitTree.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

#include "wspdfuse/geometry.hpp"
#include "wspdfuse/split_tree.hpp"

namespace wspdfuse {

inline void check_separation(double s) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw ConfigError("separation parameter s must be a finite real > 0, got " +
                      std::to_string(s));
}

// s * max(rho_a, rho_b) <= gap(a, b).
inline bool is_well_separated(const Ball& a, const Ball& b, double s) {
  check_separation(s);
  return s * std::max(a.radius, b.radius) <= ball_gap(a, b);
}

// Literal form, for checking radii and gaps reported elsewhere.
inline bool is_well_separated(double radius_a, double radius_b, double gap, double s) {
  check_separation(s);
  return s * std::max(radius_a, radius_b) <= gap;
}

struct WspdPair {
  std::size_t node_a = kNoNode;
  std::size_t node_b = kNoNode;
  double gap = 0.0;
  double max_radius = 0.0;
};

/// All highest-order s-well-separated node pairs of a tree. Holds a pointer to
/// the tree, which must outlive it.
struct Realization {
  std::vector<WspdPair> pairs;
  double s = 0.0;
  const SplitTree* tree = nullptr;

  std::size_t size_a(const WspdPair& p) const { return tree->node(p.node_a).size(); }
  std::size_t size_b(const WspdPair& p) const { return tree->node(p.node_b).size(); }
  std::size_t size(const WspdPair& p) const { return size_a(p) + size_b(p); }
};

namespace detail {

inline bool overlap(const SplitTree& t, std::size_t u, std::size_t v) {
  const auto& a = t.node(u);
  const auto& b = t.node(v);
  return a.begin < b.end && b.begin < a.end;
}

}  // namespace detail

/// Pairs covering u x v: emit (u, v) if separated, otherwise split the node
/// with the larger ball (ties split u) and handle both halves, left half
/// first. Appends to `out` in that depth-first order.
inline void find_pairs(const SplitTree& tree, std::size_t u, std::size_t v, double s,
                       std::vector<WspdPair>& out) {
  check_separation(s);
  if (detail::overlap(tree, u, v))
    throw PreconditionError("find_pairs on nodes with overlapping point sets (" +
                            std::to_string(u) + ", " + std::to_string(v) + ")");
  std::vector<std::pair<std::size_t, std::size_t>> stack{{u, v}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const Ball& ba = tree.ball(a);
    const Ball& bb = tree.ball(b);
    const double gap = ball_gap(ba, bb);
    const double rmax = std::max(ba.radius, bb.radius);
    const bool leaf_a = tree.node(a).is_leaf(), leaf_b = tree.node(b).is_leaf();
    if (s * rmax <= gap || (leaf_a && leaf_b)) {
      out.push_back(WspdPair{a, b, gap, rmax});
      continue;
    }
    bool split_a = ba.radius >= bb.radius;
    if (split_a && leaf_a) split_a = false;
    if (!split_a && leaf_b) split_a = true;
    // Pushed in reverse so the left child is processed first.
    if (split_a) {
      stack.emplace_back(tree.node(a).right, b);
      stack.emplace_back(tree.node(a).left, b);
    } else {
      stack.emplace_back(a, tree.node(b).right);
      stack.emplace_back(a, tree.node(b).left);
    }
  }
}

inline std::vector<WspdPair> find_pairs(const SplitTree& tree, std::size_t u,
                                        std::size_t v, double s) {
  std::vector<WspdPair> out;
  find_pairs(tree, u, v, s, out);
  return out;
}

/// Union of find_pairs(w.left, w.right) over every internal node w, ordered
/// by w's id. With threads > 1 internal nodes are processed concurrently and
/// merged in the same order, so the output does not depend on `threads`.
inline Realization realize(const SplitTree& tree, double s, unsigned threads = 1) {
  check_separation(s);
  Realization r;
  r.s = s;
  r.tree = &tree;

  std::vector<std::size_t> internal;
  for (const auto& n : tree.nodes())
    if (!n.is_leaf()) internal.push_back(n.id);

  if (threads <= 1 || internal.size() < 2) {
    for (std::size_t w : internal)
      find_pairs(tree, tree.node(w).left, tree.node(w).right, s, r.pairs);
    return r;
  }

  std::vector<std::vector<WspdPair>> per_node(internal.size());
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < internal.size(); k += threads) {
          const auto& w = tree.node(internal[k]);
          find_pairs(tree, w.left, w.right, s, per_node[k]);
        }
      });
  }
  for (auto& v : per_node) r.pairs.insert(r.pairs.end(), v.begin(), v.end());
  return r;
}

/// Pair with the most points in total; the first emitted wins ties.
inline const WspdPair& largest_pair(const Realization& r) {
  if (r.pairs.empty())
    throw PreconditionError("realization is empty (source has a single point)");
  const WspdPair* best = &r.pairs.front();
  for (const auto& p : r.pairs)
    if (r.size(p) > r.size(*best)) best = &p;
  return *best;
}

}  // namespace wspdfuse
