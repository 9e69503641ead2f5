#pragma once

#include <cstdint>
#include <random>

namespace noether {

/// Seedable random stream with a fixed cross-platform algorithm:
/// MT19937-64 (fully specified by the C++ standard) mapped to doubles by
/// taking the top 53 bits, u = (x >> 11) * 2^-53. No std distribution
/// objects are used, so identical seeds give identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace noether
