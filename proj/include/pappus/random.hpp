// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <cstdint>

namespace pappus::rng {

/// splitmix64 finaliser.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: the value at `counter` depends only on (seed, counter).
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
  return mix(mix(seed) ^ (counter * 0xd1b54a32d192ed03ULL));
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
}

}  // namespace pappus::rng
