#include "aircomp/rng.hpp"

#include <cmath>
#include <numbers>

namespace aircomp {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double RandomStream::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  // 1 - u1 is in (0, 1], so the log is finite.
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::rayleigh(double scale) {
  return scale * std::sqrt(-2.0 * std::log1p(-uniform01()));
}

}  // namespace aircomp
