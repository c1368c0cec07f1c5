#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aircomp {

// SplitMix64 finalizer. Published integer hash; the whole seeding scheme is
// reproducible from this function plus FNV-1a below, so other
// implementations can derive identical stream keys.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the bytes of a purpose tag.
std::uint64_t hash_tag(std::string_view tag);

// Value-type identifier of one deterministic random stream. Keys are derived
// from (master_seed, purpose tag, indices) and never mutated, so any worker
// can reconstruct any stream independent of scheduling.
struct StreamKey {
  std::uint64_t state = 0;

  static StreamKey root(std::uint64_t master_seed) { return {mix64(master_seed)}; }
  [[nodiscard]] StreamKey child(std::string_view tag) const { return {mix64(state ^ hash_tag(tag))}; }
  [[nodiscard]] StreamKey child(std::uint64_t index) const { return {mix64(state ^ (index + 0x9E3779B97F4A7C15ULL))}; }
};

// Deterministic random stream over a mt19937_64 engine. Gaussian draws use
// Box-Muller without pair caching, so the draw sequence is a pure function
// of the key and the call sequence.
class RandomStream {
 public:
  explicit RandomStream(StreamKey key) : engine_(key.state) {}
  explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal();

  // Rayleigh(scale) via inverse-CDF transform of one uniform draw.
  double rayleigh(double scale);

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aircomp
