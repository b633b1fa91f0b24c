#pragma once

#include <cstdint>
#include <random>

#include "rsgdim/complex_util.hpp"

namespace rsg {

// Library-independent draws so seeded runs reproduce byte-identically
// regardless of the standard library's distribution implementations.

// Uniform integer in [0, n), Lemire's multiply-shift with rejection.
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    std::uint64_t t = (0 - n) % n;
    while (lo < t) {
      m = static_cast<unsigned __int128>(rng()) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1).
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rsg
