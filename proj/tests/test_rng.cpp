#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "dabg/rng.hpp"

using namespace dabg;

TEST_CASE("derive_seed is deterministic and stream-separated") {
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));
  CHECK(derive_seed(42, 1, 7) == derive_seed(42, 1, 7));

  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ULL, 1ULL, 42ULL}) {
    for (std::uint64_t stream = 0; stream < 8; ++stream) {
      for (std::uint64_t index = 0; index < 8; ++index) {
        seen.insert(derive_seed(base, stream, index));
      }
    }
  }
  CHECK(seen.size() == 3 * 8 * 8);  // no collisions across nearby streams
}

TEST_CASE("uniform01 stays in [0,1) and matches the engine transform") {
  Rng rng(123);
  std::mt19937_64 mirror(123);
  for (int i = 0; i < 10000; ++i) {
    const double expected =
        static_cast<double>(mirror() >> 11) * 0x1.0p-53;
    const double got = rng.uniform01();
    CHECK(got == expected);
    CHECK(got >= 0.0);
    CHECK(got < 1.0);
  }
}

TEST_CASE("identical seeds give identical draw sequences") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.gamma(0.7) == b.gamma(0.7));
    CHECK(a.cauchy(3.0, 2.0) == b.cauchy(3.0, 2.0));
    CHECK(a.below(97) == b.below(97));
  }
}

TEST_CASE("below is in range and roughly uniform") {
  Rng rng(99);
  CHECK(rng.below(1) == 0);

  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t x = rng.below(10);
    REQUIRE(x < 10);
    ++counts[static_cast<std::size_t>(x)];
  }
  for (const int c : counts) {
    CHECK(c > n / 10 - 1200);  // ~4 sigma
    CHECK(c < n / 10 + 1200);
  }
}

TEST_CASE("normal has standard moments") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("gamma has the right mean and variance") {
  for (const double shape : {0.4, 1.0, 2.5, 7.0}) {
    Rng rng(static_cast<std::uint64_t>(shape * 1000));
    const int n = 200000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape);
      REQUIRE(x >= 0.0);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - shape) < 0.05 * shape + 0.01);
    CHECK(std::abs(var - shape) < 0.08 * shape + 0.02);
  }
}

TEST_CASE("cauchy has the right median and quartile spread") {
  Rng rng(17);
  const int n = 200001;
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.cauchy(4.0, 2.5);
  std::sort(xs.begin(), xs.end());
  const double median = xs[n / 2];
  const double q1 = xs[n / 4];
  const double q3 = xs[3 * n / 4];
  CHECK(std::abs(median - 4.0) < 0.05);
  // Cauchy quartiles sit exactly one scale away from the median.
  CHECK(std::abs((q3 - q1) / 2.0 - 2.5) < 0.08);
}
