// Counter-based deterministic random numbers (SplitMix64).  Sampling is keyed
// by (seed, point index, lane), so per-point work is order-free and results do
// not depend on how points are distributed over workers.

#pragma once

#include <cstdint>

namespace phm {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t rng_key(uint64_t seed, uint64_t index, uint64_t lane) {
  uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
  h = splitmix64(h ^ (index * 0x13198a2e03707344ULL + 0xa4093822299f31d0ULL));
  h = splitmix64(h ^ (lane * 0x082efa98ec4e6c89ULL + 0x452821e638d01377ULL));
  return h;
}

// Uniform double in [0, 1).
inline double rng_unit(uint64_t seed, uint64_t index, uint64_t lane) {
  return static_cast<double>(rng_key(seed, index, lane) >> 11) * 0x1.0p-53;
}

// Uniform double in [-1, 1).
inline double rng_sym(uint64_t seed, uint64_t index, uint64_t lane) {
  return 2.0 * rng_unit(seed, index, lane) - 1.0;
}

}  // namespace phm
