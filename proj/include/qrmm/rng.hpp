#pragma once

#include <cstdint>
#include <random>

namespace qrmm {

/// Seeded uniform generator with derivable substreams. Replicate l of a run
/// seeded with s always draws from substream(s, l), so samples do not depend
/// on the execution schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Seed of the independent stream derived from (seed, stream index).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15ull);
  }

  /// Independent stream derived from (seed, stream index).
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive(seed, stream));
  }

  /// Uniform draw strictly inside (0,1): 53-bit mantissa shifted off zero.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::uint64_t next_raw() { return engine_(); }

 private:
  // splitmix64 finalizer; spreads low-entropy seeds across the state space.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace qrmm
