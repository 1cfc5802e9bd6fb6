#ifndef ALLIANCE_LAB_RNG_HPP
#define ALLIANCE_LAB_RNG_HPP

#include <cstdint>
#include <random>

namespace alab {

// SplitMix64 mixing step. Used to derive independent substream seeds so that
// per-item loops (games, episodes) give identical results whether they run
// serially or in parallel.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(mix_seed(seed, index));
}

inline double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace alab

#endif  // ALLIANCE_LAB_RNG_HPP
