#pragma once

#include <cstdint>
#include <random>

namespace adfcm {

// std::mt19937_64's output sequence is fixed by the standard, but the std
// distributions are not; these helpers keep generated data identical across
// standard libraries.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal deviate via Box-Muller (one value per call).
double standard_normal(std::mt19937_64& rng);

}  // namespace adfcm
