#include "lexent/random.hpp"

namespace lexent {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 1099511628211ULL;
  }
  return state;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view component,
                          std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a64(component)) + index);
}

}  // namespace lexent
