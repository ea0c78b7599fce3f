#pragma once

#include <cstdint>

namespace fsl::detail {

// splitmix64 finalizer: a stateless mixing function, used as a
// counter-based generator so every draw is a pure function of its
// coordinates (seed, stream, index) and independent of evaluation order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ stream) ^ (0x51ed27f4a13fe3d1ULL * (index + 1)));
}

/// Uniform double in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_pm1(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return 2.0 * uniform01(seed, stream, index) - 1.0;
}

}  // namespace fsl::detail
