#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace trapeze {

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline void hash_combine(std::uint64_t& seed, std::uint64_t value) noexcept {
  seed = mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash_string(std::string_view s) noexcept {
  return static_cast<std::uint64_t>(std::hash<std::string_view>{}(s));
}

}  // namespace trapeze
