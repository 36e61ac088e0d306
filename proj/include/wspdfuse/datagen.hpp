#pragma once

// Seeded synthetic point clouds.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distribution classes are implementation-defined, so
// the transforms below are written out explicitly:
//   uniform      a + (b - a) * u,  u = top 53 bits / 2^53 in [0, 1)
//   gaussian     Box-Muller on (u1, u2), both values of each pair used
//   cauchy       location + scale * tan(pi * (u - 1/2))
//   exponential  -log(1 - u) / rate
//   lognormal    exp(gaussian(log_mean, log_stddev))
// Coordinates are drawn point by point in coordinate order.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "wspdfuse/geometry.hpp"

namespace wspdfuse {

enum class Family { kUniform, kGaussian, kCauchy, kExponential, kLognormal };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::kUniform: return "uniform";
    case Family::kGaussian: return "gaussian";
    case Family::kCauchy: return "cauchy";
    case Family::kExponential: return "exponential";
    case Family::kLognormal: return "lognormal";
  }
  return "unknown";
}

inline Family parse_family(const std::string& name) {
  for (Family f : {Family::kUniform, Family::kGaussian, Family::kCauchy,
                   Family::kExponential, Family::kLognormal})
    if (name == family_name(f)) return f;
  throw ConfigError("unknown distribution family '" + name + "'");
}

// Names of the (first, second) parameters for each family, as used in
// config files and CLI flags. Exponential has a single parameter.
inline std::pair<const char*, const char*> family_param_names(Family f) {
  switch (f) {
    case Family::kUniform: return {"min", "max"};
    case Family::kGaussian: return {"mean", "stddev"};
    case Family::kCauchy: return {"location", "scale"};
    case Family::kExponential: return {"rate", nullptr};
    case Family::kLognormal: return {"log_mean", "log_stddev"};
  }
  return {nullptr, nullptr};
}

struct DistributionSpec {
  Family family = Family::kUniform;
  double a = 0.0;  // min | mean | location | rate | log_mean
  double b = 1.0;  // max | stddev | scale | (unused) | log_stddev
  std::size_t dim = 2;
  std::size_t count = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (count < 1) throw ConfigError("count must be >= 1");
    if (dim <= 1)
      throw ConfigError("dim must exceed 1: " + std::string(violation_name(Violation::kDimensionTooSmall)));
    if (!std::isfinite(a) || !std::isfinite(b))
      throw ConfigError("distribution parameters must be finite");
    const auto [na, nb] = family_param_names(family);
    switch (family) {
      case Family::kUniform:
        if (!(a < b)) throw ConfigError("uniform requires min < max");
        break;
      case Family::kGaussian:
      case Family::kCauchy:
      case Family::kLognormal:
        if (!(b > 0)) throw ConfigError(std::string(family_name(family)) + " requires " + nb + " > 0");
        break;
      case Family::kExponential:
        if (!(a > 0)) throw ConfigError(std::string("exponential requires ") + na + " > 0");
        break;
    }
  }

  std::string describe() const {
    const auto [na, nb] = family_param_names(family);
    std::string s = std::string(family_name(family)) + "(" + na + "=" + fmt_num(a);
    if (nb) s += std::string(", ") + nb + "=" + fmt_num(b);
    return s + "), dim=" + std::to_string(dim) + ", count=" + std::to_string(count) +
           ", seed=" + std::to_string(seed);
  }

  static std::string fmt_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
};

class CoordinateSampler {
 public:
  explicit CoordinateSampler(const DistributionSpec& spec) : spec_(spec), engine_(spec.seed) {}

  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double standard_normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    double u1 = unit();
    while (u1 == 0.0) u1 = unit();
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  double operator()() {
    switch (spec_.family) {
      case Family::kUniform: return spec_.a + (spec_.b - spec_.a) * unit();
      case Family::kGaussian: return spec_.a + spec_.b * standard_normal();
      case Family::kCauchy: return spec_.a + spec_.b * std::tan(std::numbers::pi * (unit() - 0.5));
      case Family::kExponential: return -std::log1p(-unit()) / spec_.a;
      case Family::kLognormal: return std::exp(spec_.a + spec_.b * standard_normal());
    }
    return 0.0;
  }

 private:
  DistributionSpec spec_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Draws `count` distinct points. A point that repeats an earlier one or has
/// a non-finite coordinate is discarded and redrawn from the same stream.
inline PointSet generate(const DistributionSpec& spec) {
  spec.validate();
  CoordinateSampler sample(spec);
  std::vector<double> flat;
  flat.reserve(spec.count * spec.dim);

  struct RowHash {
    std::size_t dim;
    const std::vector<double>* data;
    std::size_t operator()(std::size_t row) const {
      std::size_t h = 1469598103934665603ull;
      for (std::size_t d = 0; d < dim; ++d) {
        const double x = (*data)[row * dim + d];
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        h = (h ^ bits) * 1099511628211ull;
      }
      return h;
    }
  };
  struct RowEq {
    std::size_t dim;
    const std::vector<double>* data;
    bool operator()(std::size_t a, std::size_t b) const {
      return std::memcmp(data->data() + a * dim, data->data() + b * dim, dim * sizeof(double)) == 0;
    }
  };
  std::unordered_set<std::size_t, RowHash, RowEq> seen(
      spec.count * 2, RowHash{spec.dim, &flat}, RowEq{spec.dim, &flat});

  std::size_t rejected = 0;
  while (flat.size() < spec.count * spec.dim) {
    const std::size_t row = flat.size() / spec.dim;
    bool finite = true;
    for (std::size_t d = 0; d < spec.dim; ++d) {
      const double x = sample() + 0.0;
      finite = finite && std::isfinite(x);
      flat.push_back(x);
    }
    if (finite && seen.insert(row).second) continue;
    flat.resize(row * spec.dim);
    if (++rejected > 1000 + spec.count)
      throw ConfigError("cannot draw " + std::to_string(spec.count) +
                        " distinct finite points from " + spec.describe());
  }
  return PointSet::from_flat(std::move(flat), spec.dim);
}

}  // namespace wspdfuse
