#ifndef STRUCTDICT_RNG_HPP
#define STRUCTDICT_RNG_HPP

#include <cstdint>
#include <random>

namespace structdict {

// splitmix64-style mix of a master seed and a stream id, so independent
// streams (per class, per repeat, per fold) are reproducible and
// uncorrelated regardless of execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

} // namespace structdict

#endif
