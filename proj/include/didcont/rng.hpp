#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace didcont {

using Rng = std::mt19937_64;

//! SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Deterministic child seed for a (seed, index, ...) tuple. Streams derived
//! this way do not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path)
{
  std::uint64_t h = mix64(seed);
  for (std::uint64_t v : path)
    h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
  return h;
}

inline std::uint64_t hash_double(std::uint64_t h, double v)
{
  // +0.0 and -0.0 hash alike
  if (v == 0.0)
    v = 0.0;
  return mix64(h ^ std::bit_cast<std::uint64_t>(v));
}

} // namespace didcont
