#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace d2dsim {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a; std::hash gives no cross-build stability guarantee.
inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

/// Independent, labeled random stream derived from a drop seed. All schemes
/// of a drop draw scenario state from the same labels, so they see the same
/// users, gains and targets.
inline Rng substream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
  return Rng(mix(mix(seed, hash_label(label)), index));
}

// Uniform in (0,1) from a 64-bit key.
inline double key_to_unit(std::uint64_t key) {
  return (static_cast<double>(key >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal variate that is a pure function of the key. Backs the
/// frozen per-drop shadowing field without storing per-link state.
inline double keyed_normal(std::uint64_t key) {
  const double u1 = key_to_unit(splitmix64(key));
  const double u2 = key_to_unit(splitmix64(key ^ 0xD1B54A32D192ED03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline double uniform_unit(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

}  // namespace d2dsim
