#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gromp {

/// Stable seed derivation: folds a path of integers into the master seed
/// with splitmix64 so every (replication, stage, trial, role) owns its stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  for (std::uint64_t p : path) h = mix(h ^ mix(p));
  return h;
}

inline std::mt19937_64 make_stream(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace gromp
