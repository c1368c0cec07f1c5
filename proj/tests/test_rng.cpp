#include <doctest.h>

#include <cmath>
#include <vector>

#include "aircomp/rng.hpp"

using namespace aircomp;

TEST_CASE("streams are bit-reproducible from their key") {
  const StreamKey key = StreamKey::root(12345).child("unit").child(std::uint64_t{7});
  RandomStream a(key), b(key);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.bits() == b.bits());
  }
}

TEST_CASE("child keys differ by tag and index") {
  const StreamKey root = StreamKey::root(1);
  CHECK(root.child("x").state != root.child("y").state);
  CHECK(root.child(std::uint64_t{0}).state != root.child(std::uint64_t{1}).state);
  CHECK(StreamKey::root(1).state != StreamKey::root(2).state);
}

TEST_CASE("uniform01 stays in [0, 1) with mean near 1/2") {
  RandomStream rng(StreamKey::root(99).child("uniform"));
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / n;
  const double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(mean - 0.5) < 5.0 * se);
}

TEST_CASE("normal has zero mean and unit variance") {
  RandomStream rng(StreamKey::root(7).child("normal"));
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  // Var of the variance estimate is roughly 2/n for Gaussians.
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("rayleigh draw matches the second moment 2 sigma^2") {
  RandomStream rng(StreamKey::root(13).child("rayleigh"));
  const int n = 100000;
  const double scale = 1.7;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.rayleigh(scale);
    REQUIRE(x >= 0.0);
    sum_sq += x * x;
  }
  const double second = sum_sq / n;
  // Var(X^2) = E[X^4] - E[X^2]^2 = 8 s^4 - 4 s^4 = 4 s^4 for Rayleigh(s).
  const double se = 2.0 * scale * scale / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(second - 2.0 * scale * scale) < 3.0 * se);
}
