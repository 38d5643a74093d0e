#include "lexent/metrics.hpp"

#include "lexent/error.hpp"

namespace lexent {

Confusion confusion(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) throw InvalidArgument("f1: length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool g = gold[i] != 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f1_score(std::span<const int> predicted, std::span<const int> gold) {
  if (gold.empty()) throw InvalidArgument("f1: empty input");
  const Confusion c = confusion(predicted, gold);
  if (c.tp + c.fp == 0 || c.tp + c.fn == 0) return 0.0;
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

}  // namespace lexent
