#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dabg {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for (base, stream, index). Snapshots, sides, and models each get
// their own stream so they can be computed in any order (or in parallel) with
// results identical to sequential execution.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ (0x9e3779b97f4a7c15ULL + stream));
  h = mix64(h ^ (0xc2b2ae3d27d4eb4fULL + index));
  return h;
}

// Seeded generator with explicit variate recipes. std::mt19937_64 output is
// pinned by the standard and every transform below is written out in full, so
// a (seed, call sequence) pair produces identical draws on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1), 53 bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1].
  double uniform01_pos() { return 1.0 - uniform01(); }

  // Unbiased integer in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t x;
    do {
      x = engine_() & mask;
    } while (x >= bound);
    return x;
  }

  // Standard normal via Box-Muller (no caching: two uniforms per call keeps
  // the draw sequence independent of call history).
  double normal() {
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang; boost to shape+1 for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform01_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Cauchy(location, scale) via inverse CDF.
  double cauchy(double location, double scale) {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return location + scale * std::tan(std::numbers::pi * (u - 0.5));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dabg
