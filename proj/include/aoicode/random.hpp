#pragma once

#include <cstdint>
#include <random>

namespace aoicode {

// Uniform draw on [0,1) from the top 53 bits; unlike
// std::uniform_real_distribution the sequence is identical across
// standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& rng, double p) { return uniform01(rng) < p; }

// Independent per-run streams derived from one seed.
enum class Stream : std::uint64_t { arrivals = 1, erasures = 2, policy = 3 };

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s)};
  return std::mt19937_64(seq);
}

}  // namespace aoicode
