#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sumoss {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Stable across platforms and releases; every derived
/// seed in the project goes through this.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a list of words into one seed: h = mix64(h ^ w) for each word.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = mix64(base);
  for (auto w : words) h = mix64(h ^ w);
  return h;
}

/// Stream tags so that independent consumers of one mission seed never share
/// a random stream.
enum class Stream : std::uint64_t {
  landing = 0x4c414e44,   // "LAND"
  sumoss = 0x53554d4f,    // "SUMO"
  random = 0x52414e44,    // "RAND"
  sweep = 0x53574550,     // "SWEP"
};

inline std::uint64_t stream_seed(std::uint64_t seed, Stream s, std::uint64_t step) {
  return derive_seed(seed, {static_cast<std::uint64_t>(s), step});
}

}  // namespace sumoss
