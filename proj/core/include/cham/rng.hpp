#pragma once

#include <cstdint>

namespace cham {

// SplitMix64, reference constants from Steele/Lea/Flood.
// Used only to expand a 64-bit seed into xoshiro state.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256**, reference constants from Blackman/Vigna
// (https://prng.di.unimi.it/xoshiro256starstar.c). All stream sampling in
// this project flows through this generator so that runs reproduce
// bit-exactly across platforms.
struct Xoshiro256ss {
  std::uint64_t s[4] = {1, 2, 3, 4};

  Xoshiro256ss() = default;
  explicit constexpr Xoshiro256ss(std::uint64_t seed) { seed_with(seed); }

  constexpr void seed_with(std::uint64_t seed) {
    SplitMix64 sm(seed);
    s[0] = sm.next();
    s[1] = sm.next();
    s[2] = sm.next();
    s[3] = sm.next();
  }

  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;

    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];

    s[2] ^= t;
    s[3] = rotl(s[3], 45);

    return result;
  }

  // Canonical double in [0, 1): top 53 bits scaled by 2^-53.
  constexpr double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) via 128-bit multiply-shift range
  // reduction. Deterministic; the O(bound/2^64) bias is irrelevant at the
  // stream lengths used here.
  constexpr std::uint64_t next_bounded(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }
};

}  // namespace cham
