#pragma once

#include <cstdint>
#include <random>

namespace survkit {

/// splitmix64 finalizer; mixes (seed, stream coordinates) into an
/// independent engine seed so parallel workers never share a stream.
inline uint64_t mix_seed(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL;
  for (uint64_t w : {b, c, d}) {
    z += w + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
  }
  return z;
}

inline std::mt19937_64 make_engine(uint64_t seed, uint64_t s1 = 0, uint64_t s2 = 0, uint64_t s3 = 0) {
  return std::mt19937_64(mix_seed(seed, s1, s2, s3));
}

}  // namespace survkit
