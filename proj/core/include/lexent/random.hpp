#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lexent {

// All randomness in the library descends from a single user seed. Each
// component asks for its own stream by name (and optionally an index, e.g. a
// fold id), so results do not depend on the order in which components run.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view component,
                          std::uint64_t index = 0);

inline std::mt19937_64 make_rng(std::uint64_t seed, std::string_view component,
                                std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(seed, component, index));
}

// 64-bit FNV-1a, used for stable content hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 14695981039346656037ULL);

}  // namespace lexent
