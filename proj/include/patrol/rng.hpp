#pragma once

#include <cstdint>

namespace patrol {

// Counter-based 64-bit PRNG (splitmix64). Streams derived with
// derive_stream() are independent, so parallel trajectories stay
// reproducible regardless of scheduling.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform double in [0,1)
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) {
    return next() % bound;  // bias negligible for bound << 2^64
  }
};

inline constexpr const char* kRngAlgorithm = "splitmix64";
inline constexpr int kRngVersion = 1;

// Derives the seed of sub-stream `index` from a master seed.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0xa0761d6478bd642fULL * (index + 1)));
  mix.next();
  return mix.next();
}

}  // namespace patrol
