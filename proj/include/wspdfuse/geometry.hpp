#pragma once

// Points, point sets, Euclidean / power distances and balls.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wspdfuse/error.hpp"

namespace wspdfuse {

using Coords = std::span<const double>;

struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const noexcept { return coords.size(); }
  operator Coords() const noexcept { return coords; }

  friend bool operator==(const Point&, const Point&) = default;
};

namespace detail {

inline void require_same_dim(Coords a, Coords b) {
  if (a.size() != b.size())
    throw InputError("dimension mismatch: " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
}

// Sum in coordinate index order; callers rely on the exact order for
// reproducible results.
inline double squared_distance_unchecked(Coords a, Coords b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace detail

inline double squared_distance(Coords a, Coords b) {
  detail::require_same_dim(a, b);
  return detail::squared_distance_unchecked(a, b);
}

inline double euclidean_distance(Coords a, Coords b) {
  return std::sqrt(squared_distance(a, b));
}

inline void check_power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw ConfigError("power weighting must be a finite real >= 1, got " +
                      std::to_string(p));
}

// Edge weight of the power-weighted path metric: |a - b|^p.
inline double power_distance(Coords a, Coords b, double p) {
  check_power(p);
  const double d = euclidean_distance(a, b);
  return p == 1.0 ? d : std::pow(d, p);
}

/// Immutable, validated collection of distinct points sharing one ambient
/// dimension > 1. Coordinates are stored row-major in a single buffer.
///
/// Construct through `validate_point_set` or `PointSet::from_points`; both
/// reject the three structural violations (dimension <= 1, empty input,
/// repeated point) plus non-finite coordinates and ragged rows.
class PointSet {
 public:
  PointSet() = default;

  static PointSet from_points(const std::vector<Point>& points);
  static PointSet from_flat(std::vector<double> flat, std::size_t dim);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return size() == 0; }

  Coords operator[](std::size_t i) const noexcept {
    return Coords(data_.data() + i * dim_, dim_);
  }
  Point point(std::size_t i) const {
    auto c = (*this)[i];
    return Point(std::vector<double>(c.begin(), c.end()));
  }
  const std::vector<double>& flat() const noexcept { return data_; }

  // Subset in the given index order; the result is valid by construction.
  PointSet subset(std::span<const std::size_t> indices) const {
    PointSet out;
    out.dim_ = dim_;
    out.data_.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
      auto c = (*this)[i];
      out.data_.insert(out.data_.end(), c.begin(), c.end());
    }
    return out;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<double> data_;
  std::size_t dim_ = 0;
};

enum class Violation {
  kNone,
  kDimensionTooSmall,  // points must live in R^n, n > 1
  kEmpty,              // |S| > 0
  kDuplicate,          // elements are unique
  kDimensionMismatch,
  kNonFinite,
};

inline const char* violation_name(Violation v) {
  switch (v) {
    case Violation::kNone: return "none";
    case Violation::kDimensionTooSmall: return "ambient dimension must exceed 1";
    case Violation::kEmpty: return "point set must be non-empty";
    case Violation::kDuplicate: return "points must be unique";
    case Violation::kDimensionMismatch: return "points disagree on dimension";
    case Violation::kNonFinite: return "coordinate is NaN or infinite";
  }
  return "unknown";
}

struct ValidationReport {
  Violation violation = Violation::kNone;
  std::size_t index = 0;        // offending point
  std::size_t other_index = 0;  // first occurrence, for duplicates
  std::optional<PointSet> set;  // present iff violation == kNone

  bool ok() const noexcept { return violation == Violation::kNone; }
  std::string message() const {
    if (ok()) return "valid";
    std::string m = violation_name(violation);
    if (violation == Violation::kDuplicate)
      m += " (point " + std::to_string(index) + " repeats point " +
           std::to_string(other_index) + ")";
    else if (violation != Violation::kEmpty)
      m += " (point " + std::to_string(index) + ")";
    return m;
  }
};

namespace detail {

// Adding +0.0 maps -0.0 to +0.0, so bitwise equality matches value equality
// for finite coordinates.
inline double canonical(double x) noexcept { return x + 0.0; }

inline ValidationReport validate_flat(std::vector<double> flat,
                                      std::size_t dim, std::size_t count) {
  ValidationReport r;
  if (count == 0) {
    r.violation = Violation::kEmpty;
    return r;
  }
  if (dim <= 1) {
    r.violation = Violation::kDimensionTooSmall;
    return r;
  }
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t d = 0; d < dim; ++d) {
      double& x = flat[i * dim + d];
      if (!std::isfinite(x)) {
        r.violation = Violation::kNonFinite;
        r.index = i;
        return r;
      }
      x = canonical(x);
    }

  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  auto row = [&](std::size_t i) { return flat.data() + i * dim; };
  auto bits_less = [&](std::size_t a, std::size_t b) {
    const int c = std::memcmp(row(a), row(b), dim * sizeof(double));
    return c != 0 ? c < 0 : a < b;
  };
  std::sort(order.begin(), order.end(), bits_less);
  // Equal rows are adjacent and ordered by index, so each run starts with
  // the first occurrence. Report the lowest-indexed repeat.
  bool found = false;
  std::size_t run_start = order[0];
  for (std::size_t k = 1; k < count; ++k) {
    const std::size_t prev = order[k - 1], cur = order[k];
    if (std::memcmp(row(prev), row(cur), dim * sizeof(double)) != 0) {
      run_start = cur;
      continue;
    }
    if (!found || cur < r.index) {
      found = true;
      r.index = cur;
      r.other_index = run_start;
    }
  }
  if (found) {
    r.violation = Violation::kDuplicate;
    return r;
  }
  r.set = PointSet::from_flat(std::move(flat), dim);
  return r;
}

}  // namespace detail

inline ValidationReport validate_point_set(const std::vector<Point>& raw) {
  ValidationReport r;
  if (raw.empty()) {
    r.violation = Violation::kEmpty;
    return r;
  }
  const std::size_t dim = raw.front().dim();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].dim() <= 1) {
      r.violation = Violation::kDimensionTooSmall;
      r.index = i;
      return r;
    }
    if (raw[i].dim() != dim) {
      r.violation = Violation::kDimensionMismatch;
      r.index = i;
      return r;
    }
  }
  std::vector<double> flat;
  flat.reserve(raw.size() * dim);
  for (const auto& p : raw) flat.insert(flat.end(), p.coords.begin(), p.coords.end());
  return detail::validate_flat(std::move(flat), dim, raw.size());
}

inline PointSet PointSet::from_points(const std::vector<Point>& points) {
  auto r = validate_point_set(points);
  if (!r.ok()) throw InputError("invalid point set: " + r.message());
  return std::move(*r.set);
}

// Trusted constructor for already-validated data; used by validate_flat and
// generators that enforce the invariants themselves.
inline PointSet PointSet::from_flat(std::vector<double> flat, std::size_t dim) {
  PointSet s;
  s.data_ = std::move(flat);
  s.dim_ = dim;
  return s;
}

// Validates a flat row-major buffer; used by file import.
inline PointSet make_point_set(std::vector<double> flat, std::size_t dim) {
  if (dim == 0) throw InputError("invalid point set: " + std::string(violation_name(Violation::kEmpty)));
  if (flat.size() % dim != 0) throw InputError("coordinate buffer is not a multiple of dim");
  const std::size_t count = flat.size() / dim;
  auto r = detail::validate_flat(std::move(flat), dim, count);
  if (!r.ok()) throw InputError("invalid point set: " + r.message());
  return std::move(*r.set);
}

/// Closed ball in R^n. `radius` is the rho of the separation predicate.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;

  std::size_t dim() const noexcept { return center.size(); }
  bool contains(Coords p, double rel_tol = 0.0) const {
    return euclidean_distance(center, p) <= radius * (1.0 + rel_tol);
  }
};

// Distance between two balls' surfaces, clamped at zero when they overlap.
inline double ball_gap(const Ball& a, const Ball& b) {
  const double d = euclidean_distance(a.center, b.center);
  return std::max(0.0, d - a.radius - b.radius);
}

}  // namespace wspdfuse
