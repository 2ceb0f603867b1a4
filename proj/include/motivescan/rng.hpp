#pragma once

#include <cstdint>
#include <vector>

#include "motivescan/error.hpp"

namespace motivescan {

// SplitMix64 pseudo-random generator (Steele, Lea & Flood; the constants are
// the published ones). Chosen over std::mt19937_64 because the whole pipeline
// must be bit-reproducible across platforms and standard library versions,
// and splitmix64 is small enough to pin down exactly.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double next_double(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Unbiased integer in [0, bound) by 128-bit multiply with rejection
  // (Lemire's method). bound == 0 is a caller bug.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw MotiveError("next_below: bound must be positive");
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // In-place Fisher-Yates shuffle, walking the array from the end. With the
  // same seed the same permutation comes out on every platform.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i + 1));
      if (j != i) std::swap(items[i], items[j]);
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace motivescan
