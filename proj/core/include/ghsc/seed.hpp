#pragma once

#include <cstdint>

namespace ghsc {

// splitmix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream seed for task `index` under `master`: splitmix64(master + (index+1) * gamma)
// with the odd golden-ratio gamma. For a fixed master the map index -> seed is
// injective, so distinct tasks never share a seed.
constexpr std::uint64_t seed_derive(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

}  // namespace ghsc
