#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sgame {

/// Counter-based generator: every (seed, stream, index) triple maps to an
/// independent uniform draw, so results do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  /// Uniform double strictly inside (0, 1).
  double uniform(std::uint64_t index) const {
    const std::uint64_t bits = mix(key_ + index * 0x9e3779b97f4a7c15ULL);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential draw with the given mean.
  double exponential(std::uint64_t index, double mean) const {
    return -mean * std::log(uniform(index));
  }

  /// Rayleigh draw with the given mean.
  double rayleigh(std::uint64_t index, double mean) const {
    const double sigma = mean / std::sqrt(std::numbers::pi / 2.0);
    return sigma * std::sqrt(-2.0 * std::log(uniform(index)));
  }

  /// splitmix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

}  // namespace sgame
