#pragma once

#include <cstdint>
#include <string_view>

namespace moodcam {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Child stream seed; depends only on its inputs so parallel schedules cannot change results.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t salt) {
  return splitmix64(parent ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view salt) {
  return derive_seed(parent, fnv1a64(salt));
}

}  // namespace moodcam
