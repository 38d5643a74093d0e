#include "lexent/cosine_threshold.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "lexent/error.hpp"

namespace lexent {

CosineThreshold fit_cosine_threshold(std::span<const double> similarities,
                                     std::span<const int> labels) {
  if (similarities.size() != labels.size()) {
    throw InvalidArgument("fit_cosine_threshold: length mismatch");
  }
  const auto n = similarities.size();
  std::size_t total_pos = 0;
  for (int y : labels) total_pos += y ? 1 : 0;
  if (total_pos == 0) throw InvalidArgument("fit_cosine_threshold: no positive examples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return similarities[a] < similarities[b]; });

  // Everything predicted positive: threshold below the minimum.
  auto f1 = [&](std::size_t tp, std::size_t predicted) {
    return 2.0 * static_cast<double>(tp) / static_cast<double>(predicted + total_pos);
  };
  CosineThreshold best{similarities[order[0]] - 1.0, f1(total_pos, n)};

  // Moving the threshold past position idx drops order[0..idx] from the positives.
  std::size_t tp = total_pos;
  for (std::size_t idx = 0; idx + 1 < n; ++idx) {
    tp -= labels[order[idx]] ? 1 : 0;
    const double lo = similarities[order[idx]];
    const double hi = similarities[order[idx + 1]];
    if (hi == lo) continue;
    const double score = f1(tp, n - idx - 1);
    if (score > best.train_f1) best = {lo + (hi - lo) / 2.0, score};
  }
  return best;
}

}  // namespace lexent
