#pragma once

#include <cmath>
#include <cstdint>

#include "sonartda/types.hpp"

namespace sonartda {

// Counter-based pseudorandom generator.  Every draw is a pure function of
// (seed, counter), so streams are reproducible bit-for-bit across platforms
// and independent of evaluation order.
//
// The word function is splitmix64 (Steele, Lea & Flood's SplittableRandom
// finalizer): the counter is added to a seed-derived stream constant and
// passed through the 64-bit mix.  Uniform doubles take the top 53 bits;
// normals come from the Box-Muller transform on two consecutive counters.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : stream_(mix(seed + kGolden)) {}

  // Uniform double in (0, 1]; never returns 0 so log() is safe.
  double uniform(std::uint64_t counter) const {
    const std::uint64_t bits = mix(stream_ + counter * kGolden) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  // Independent standard normal pair for one sample index.
  void normal_pair(std::uint64_t index, double& z0, double& z1) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * kPi * u2);
    z1 = r * std::sin(2.0 * kPi * u2);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint64_t stream_;
};

}  // namespace sonartda
