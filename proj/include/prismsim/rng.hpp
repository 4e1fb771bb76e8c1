#pragma once

#include <cstdint>

namespace prismsim {

// Counter-based generator "sm64ih12/v1": splitmix64 finalizer over a mixed
// (seed, stream, counter) tuple, approximate normal via a 12-term
// Irwin-Hall sum. Pure integer/add/mul arithmetic, so streams are
// bit-identical across platforms and independent of evaluation order.
inline constexpr char kRngName[] = "sm64ih12/v1";

inline std::uint64_t sm64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return sm64_mix(sm64_mix(sm64_mix(a) ^ b) ^ c);
}

inline double u01(std::uint64_t h) {
  return double(h >> 11) * 0x1.0p-53;
}

// Mean 0, variance exactly 1 before any rounding by the caller.
inline double gauss_ih12(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t counter) {
  std::uint64_t h = mix3(seed, stream, counter);
  double s = 0.0;
  for (int d = 0; d < 12; ++d) {
    h = sm64_mix(h + std::uint64_t(d));
    s += u01(h);
  }
  return s - 6.0;
}

}  // namespace prismsim
