#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace oblique {

/// Seedable random source with a fixed, documented algorithm.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the C++
/// standard. The conversions to doubles and indices are done here rather than
/// through <random> distributions, which are implementation-defined, so a seed
/// replays bit-identically on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), unbiased (rejection on the top of the range).
  std::size_t below(std::size_t n);

  /// Index drawn by inverse CDF from a probability vector indexed with [].
  /// Never returns a zero-probability index even if rounding leaves the
  /// cumulative sum slightly under one.
  template <typename Probs>
  std::size_t categorical(const Probs& probs, std::size_t n) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = probs[i];
      if (p <= 0.0) continue;
      last_positive = i;
      acc += p;
      if (u < acc) return i;
    }
    return last_positive;
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives well-separated child seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace oblique
