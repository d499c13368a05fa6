#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cham {

// 64-bit FNV-1a. Chosen for the hashed n-gram embedder because it is
// specifiable bit-exactly in one line: offset basis 0xcbf29ce484222325,
// prime 0x100000001b3, xor-then-multiply per byte.
inline constexpr std::uint64_t kFnv1aOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnv1aPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64_bytes(const char* data, std::size_t len,
                                      std::uint64_t seed = kFnv1aOffsetBasis) {
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= kFnv1aPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t seed = kFnv1aOffsetBasis) {
  return fnv1a64_bytes(s.data(), s.size(), seed);
}

// SplitMix64 finalizer. Used to derive independent sub-seeds (per-domain
// subsampling, per-epoch reshuffles) from one run seed.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Keyed seed derivation: one SplitMix64 step with the key folded into the
// increment. mix_seed(s, a) != mix_seed(s, b) for a != b in practice.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (key + 1));
}

}  // namespace cham
