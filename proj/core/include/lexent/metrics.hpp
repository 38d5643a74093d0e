#pragma once

#include <cstddef>
#include <span>

namespace lexent {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

Confusion confusion(std::span<const int> predicted, std::span<const int> gold);

// F1 of the positive class; 0 when nothing is predicted positive or nothing
// is gold positive. Throws on length mismatch or empty input.
double f1_score(std::span<const int> predicted, std::span<const int> gold);

}  // namespace lexent
