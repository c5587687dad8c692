#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace dasopt {

// splitmix64 finalizer; used to derive decorrelated substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(seed ^ mix64(a ^ 0xd1b54a32d192ed03ULL) ^ mix64(mix64(b) ^ 0x8bb84b93962eacc9ULL));
}

/// Seeded random source for the channel simulation. The transforms are
/// hand-rolled (Box-Muller on top of mt19937_64) so a seed produces the same
/// sequence regardless of standard-library distribution internals; this is
/// what makes Monte-Carlo runs byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal N(0, 1).
  double normal() {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circularly-symmetric complex normal CN(0, 1): real and imaginary parts
  /// are independent N(0, 1/2). One Box-Muller pair per sample.
  std::complex<double> cnormal() {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dasopt
