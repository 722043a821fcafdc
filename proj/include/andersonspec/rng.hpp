#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace andersonspec::rng {

/// Stateless counter-based mixer (splitmix64 finalizer). Every (seed, counter)
/// pair maps to an independent 64-bit word, so a disorder realization does not
/// depend on traversal order and slices can be generated out of order.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t x = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(mix(seed, counter) >> 11) * 0x1.0p-53;
}

/// Uniform on [-w/2, w/2].
inline double uniform_sym(std::uint64_t seed, std::uint64_t counter, double w) {
  return (uniform01(seed, counter) - 0.5) * w;
}

/// Cauchy with median 0 and half-width delta.
inline double cauchy(std::uint64_t seed, std::uint64_t counter, double delta) {
  return delta * std::tan(std::numbers::pi * (uniform01(seed, counter) - 0.5));
}

}  // namespace andersonspec::rng
