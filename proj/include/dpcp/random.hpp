#pragma once

#include <cstdint>
#include <random>

namespace dpcp {

// Caller-owned random stream. Every randomized operation takes one by
// reference; nothing in the library keeps hidden generator state.
using Rng = std::mt19937_64;

// Uniform double in the open interval (0, 1), built from the top 53 bits.
inline double UniformOpen01(Rng& rng) {
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// splitmix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-trial seed that depends only on its coordinates, so trials can run in
// any order or on any worker.
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b, std::uint64_t c = 0) {
  return Mix64(Mix64(Mix64(Mix64(master) ^ a) ^ b) ^ c);
}

}  // namespace dpcp
