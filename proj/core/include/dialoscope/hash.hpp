#pragma once

#include <cstdint>
#include <string_view>

namespace dialoscope {

/// FNV-1a 64-bit. Deterministic across platforms; used for manifest change
/// detection and sub-seed derivation, not for security.
inline std::uint64_t fnv1a_64(std::string_view bytes,
                              std::uint64_t state = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

/// splitmix64 finalizer; decorrelates derived seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dialoscope
