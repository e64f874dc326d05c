#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace sic {

// Counter-based 64-bit generator (splitmix64 finalizer over an affine counter):
//
//   value(i) = mix64(seed + (i+1) * 0x9E3779B97F4A7C15)
//   mix64(x) = { x ^= x>>30; x *= 0xBF58476D1CE4E5B9;
//                x ^= x>>27; x *= 0x94D049BB133111EB;
//                x ^= x>>31; return x; }
//
// The stream is a pure function of (seed, i), so any language reproduces it
// from the one-line recipe above. Uniform doubles take the top 53 bits;
// Gaussians use Box-Muller on one pair of uniforms.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Sub-seed derivation: FNV-1a over the label, mixed into the parent seed.
// derive_seed(parent, label) = mix64(parent ^ fnv1a64(label))
inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return mix64(parent ^ h);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // One Box-Muller pair per call; u1 is shifted into (0,1] so log() is finite.
  void next_gaussian_pair(double& g1, double& g2) {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    g1 = r * std::cos(th);
    g2 = r * std::sin(th);
  }

  double next_gaussian() {
    double g1, g2;
    next_gaussian_pair(g1, g2);
    return g1;
  }

  // Circularly symmetric complex Gaussian with E|x|^2 = variance.
  std::complex<double> next_cgaussian(double variance) {
    double g1, g2;
    next_gaussian_pair(g1, g2);
    const double s = std::sqrt(variance * 0.5);
    return {s * g1, s * g2};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace sic
