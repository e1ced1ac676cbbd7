#pragma once

#include <cstdint>
#include <random>

namespace pidtune {

/// Deterministic random stream: mt19937_64 with hand-rolled bounded draws,
/// so the bit stream is fully specified by the seed and independent of
/// standard-library distribution implementations. Parallel runs use
/// decorrelated streams derived through SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Decorrelated seed for run `stream` of a batch seeded with `base_seed`.
  static std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream) {
    return splitmix64(splitmix64(base_seed) ^ splitmix64(stream + 1));
  }

  static Rng for_stream(std::uint64_t base_seed, std::uint64_t stream) {
    return Rng(derive_stream_seed(base_seed, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased draw in [0, n), modulo with rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t min = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= min) return x % n;
    }
  }

  /// Inclusive range draw.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (next_u64() >> 63) != 0; }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pidtune
