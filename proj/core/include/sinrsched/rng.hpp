#pragma once

#include <cstdint>
#include <random>
#include <string_view>

// Deterministic randomness helpers. Everything here is pinned to exact
// integer arithmetic (splitmix64 / FNV-1a / mt19937_64) so that identical
// seeds give identical byte streams on every platform. std::hash and the
// std <random> distributions are deliberately avoided: their outputs are
// implementation-defined.

namespace sinrsched {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent per-entity stream seed: hash of (seed, id).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(id + 0x51ed270b8a0c3c4dULL));
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix_seed(mix_seed(a, b), c);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(splitmix64(seed)); }

}  // namespace sinrsched
