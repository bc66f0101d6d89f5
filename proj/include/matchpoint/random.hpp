#pragma once

#include <cstdint>
#include <random>

namespace matchpoint {

// SplitMix64 finalizer. Constants from Steele, Lea and Flood (2014):
//   z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z ^ (z >> 31)
constexpr std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the index-th child stream of a master seed:
//   mix64(master + (index + 1) * 0x9E3779B97F4A7C15)
// Each child depends only on (master, index), so batch results do not depend
// on scheduling order.
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Caller-owned random stream. Wraps std::mt19937_64 (fully specified by the
// standard) and converts raw words to doubles itself so sequences are
// identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 bits of precision. One engine draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). One engine draw. n must be positive.
  int below(int n) {
    int k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace matchpoint
