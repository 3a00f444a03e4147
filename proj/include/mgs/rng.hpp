#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mgs {

/// Counter-based 64-bit generator: draw i is the SplitMix64 finalizer applied
/// to seed + (i + 1) * golden_gamma. The stream depends only on (seed, counter),
/// so it is identical across platforms and can be skipped ahead in O(1).
///
/// Draw order:
///   uniform()   one counter step, 53-bit mantissa in [0, 1).
///   gaussian()  two counter steps (Box-Muller, cosine branch only).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(seed_ + counter_ * kGoldenGamma);
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double gaussian() {
    // 1 - u is in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t c) { counter_ = c; }

 private:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace mgs
