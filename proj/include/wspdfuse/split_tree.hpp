#pragma once

// Fair split tree: recursively halve the point set at the midpoint of its
// widest bounding-box dimension until every node holds one point.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "wspdfuse/geometry.hpp"
#include "wspdfuse/meb.hpp"

namespace wspdfuse {

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double length() const noexcept { return hi - lo; }
};

using BoundingBox = std::vector<Extent>;

inline BoundingBox bounding_box(const PointSet& points,
                                std::span<const std::size_t> indices) {
  BoundingBox box(points.dim());
  for (std::size_t i : indices) {
    auto p = points[i];
    for (std::size_t d = 0; d < box.size(); ++d) {
      box[d].lo = std::min(box[d].lo, p[d]);
      box[d].hi = std::max(box[d].hi, p[d]);
    }
  }
  return box;
}

// Widest dimension of the box; ties go to the lowest index.
inline std::size_t largest_extent_dimension(const BoundingBox& box) {
  if (box.empty()) throw PreconditionError("bounding box has no dimensions");
  std::size_t best = 0;
  for (std::size_t d = 1; d < box.size(); ++d)
    if (box[d].length() > box[best].length()) best = d;
  return best;
}

inline std::size_t largest_extent_dimension(const PointSet& points,
                                            std::span<const std::size_t> indices) {
  if (indices.size() < 2)
    throw PreconditionError("cannot choose a split dimension for fewer than 2 points");
  return largest_extent_dimension(bounding_box(points, indices));
}

// Splitting plane for extent [lo, hi] with lo < hi. When the midpoint rounds
// down onto lo (adjacent doubles) the plane moves to hi so both sides stay
// non-empty.
inline double split_plane(const Extent& e) noexcept {
  double m = 0.5 * e.lo + 0.5 * e.hi;
  if (m <= e.lo) m = e.hi;
  return m;
}

/// Stable in-place partition of `indices` along dimension `d`: coordinates
/// below the midpoint first, the rest (including points on the plane) after.
/// Returns the size of the left part, always in [1, indices.size()).
inline std::size_t split_in_place(const PointSet& points,
                                  std::span<std::size_t> indices, std::size_t d,
                                  const Extent& extent) {
  if (indices.size() < 2)
    throw PreconditionError("cannot split a node with fewer than 2 points");
  if (!(extent.length() > 0.0))
    throw PreconditionError("zero extent along split dimension " + std::to_string(d));
  const double m = split_plane(extent);
  auto mid = std::stable_partition(indices.begin(), indices.end(),
                                   [&](std::size_t i) { return points[i][d] < m; });
  return static_cast<std::size_t>(mid - indices.begin());
}

// Copying variant of the split, convenient outside the tree.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_node(
    const PointSet& points, std::span<const std::size_t> indices, std::size_t d) {
  if (indices.size() < 2)
    throw PreconditionError("cannot split a node with fewer than 2 points");
  if (d >= points.dim()) throw PreconditionError("split dimension out of range");
  std::vector<std::size_t> work(indices.begin(), indices.end());
  const auto box = bounding_box(points, work);
  const std::size_t left = split_in_place(points, work, d, box[d]);
  return {std::vector<std::size_t>(work.begin(), work.begin() + left),
          std::vector<std::size_t>(work.begin() + left, work.end())};
}

inline constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

struct SplitNode {
  std::size_t id = 0;
  std::size_t parent = kNoNode;
  std::size_t left = kNoNode;
  std::size_t right = kNoNode;
  std::size_t depth = 0;
  // Range into SplitTree::order().
  std::size_t begin = 0;
  std::size_t end = 0;
  BoundingBox box;

  bool is_leaf() const noexcept { return left == kNoNode; }
  std::size_t size() const noexcept { return end - begin; }
};

/// Binary decomposition of a PointSet. Each node owns a contiguous slice of a
/// shared index permutation, so a node's points are a view, never a copy.
/// Node ids follow breadth-first creation order with the root at 0.
///
/// The tree is immutable after construction. Node balls are computed on first
/// request and cached; concurrent readers are safe.
class SplitTree {
 public:
  explicit SplitTree(PointSet source, double ball_eps = kDefaultBallEps)
      : source_(std::move(source)), ball_eps_(ball_eps) {
    detail::check_ball_eps(ball_eps_);
    if (source_.empty())
      throw InputError("invalid point set: " + std::string(violation_name(Violation::kEmpty)));
    build();
  }

  SplitTree(SplitTree&&) noexcept = default;
  SplitTree& operator=(SplitTree&&) noexcept = default;

  const PointSet& source() const noexcept { return source_; }
  double ball_eps() const noexcept { return ball_eps_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const SplitNode& root() const noexcept { return nodes_.front(); }
  const SplitNode& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<SplitNode>& nodes() const noexcept { return nodes_; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  std::span<const std::size_t> indices(const SplitNode& n) const noexcept {
    return std::span<const std::size_t>(order_).subspan(n.begin, n.size());
  }
  std::span<const std::size_t> indices(std::size_t id) const { return indices(node(id)); }

  const Ball& ball(std::size_t id) const {
    const SplitNode& n = node(id);
    std::call_once(ball_once_[id], [&] {
      balls_[id] = min_enclosing_ball(source_, indices(n), ball_eps_);
    });
    return balls_[id];
  }

  std::size_t depth() const noexcept {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
  }

 private:
  void build() {
    const std::size_t n = source_.size();
    order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) order_[i] = i;
    nodes_.reserve(2 * n - 1);
    nodes_.push_back(SplitNode{0, kNoNode, kNoNode, kNoNode, 0, 0, n,
                               bounding_box(source_, order_)});

    // Explicit work queue: depth can reach n - 1 on skewed inputs.
    std::deque<std::size_t> work{0};
    while (!work.empty()) {
      const std::size_t id = work.front();
      work.pop_front();
      if (nodes_[id].size() < 2) continue;

      const std::size_t d = largest_extent_dimension(nodes_[id].box);
      const std::size_t begin = nodes_[id].begin, end = nodes_[id].end;
      std::span<std::size_t> slice(order_.data() + begin, end - begin);
      const std::size_t cut = begin + split_in_place(source_, slice, d, nodes_[id].box[d]);

      const std::size_t depth = nodes_[id].depth + 1;
      const std::size_t l = nodes_.size();
      std::span<const std::size_t> cl(order_.data() + begin, cut - begin);
      std::span<const std::size_t> cr(order_.data() + cut, end - cut);
      nodes_.push_back(SplitNode{l, id, kNoNode, kNoNode, depth, begin, cut,
                                 bounding_box(source_, cl)});
      nodes_.push_back(SplitNode{l + 1, id, kNoNode, kNoNode, depth, cut, end,
                                 bounding_box(source_, cr)});
      nodes_[id].left = l;
      nodes_[id].right = l + 1;
      work.push_back(l);
      work.push_back(l + 1);
    }
    ball_once_ = std::make_unique<std::once_flag[]>(nodes_.size());
    balls_ = std::make_unique<Ball[]>(nodes_.size());
  }

  PointSet source_;
  double ball_eps_;
  std::vector<SplitNode> nodes_;
  std::vector<std::size_t> order_;
  mutable std::unique_ptr<std::once_flag[]> ball_once_;
  mutable std::unique_ptr<Ball[]> balls_;
};

inline SplitTree build_split_tree(PointSet s, double ball_eps = kDefaultBallEps) {
  return SplitTree(std::move(s), ball_eps);
}

}  // namespace wspdfuse
