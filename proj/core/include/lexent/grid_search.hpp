#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lexent/error.hpp"

namespace lexent {

struct GridPoint {
  double C = 1.0;
  int n = 0;          // iterations, H-feature model only
  double gamma = 0.0; // <= 0: default
  double C_final = 0.0;  // <= 0: same as C

  double final_C() const { return C_final > 0.0 ? C_final : C; }
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

// Grid order used for tie-breaking: smaller C first, then smaller n.
inline bool grid_less(const GridPoint& a, const GridPoint& b) {
  return std::tie(a.C, a.n, a.gamma, a.C_final) < std::tie(b.C, b.n, b.gamma, b.C_final);
}

// C in {1e-4, ..., 1e4}.
inline std::vector<double> default_c_grid() {
  return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
}

enum class ScoreOn { kValidation, kTraining };

template <typename Model>
struct GridSearchResult {
  GridPoint best;
  Model model;
  double score = 0.0;
  bool used_training_fallback = false;
  std::vector<std::pair<GridPoint, double>> trace;
  std::vector<std::string> warnings;
};

// Fits one model per grid point and keeps the best by `score`. `score` is
// called with kValidation, or kTraining when there is no validation data (a
// warning is recorded). Ties resolve to the earliest point in grid order.
template <typename Model, typename Fit, typename Score>
GridSearchResult<Model> grid_search(std::span<const GridPoint> grid, bool has_validation,
                                    Fit&& fit, Score&& score) {
  if (grid.empty()) throw InvalidArgument("grid_search: empty grid");
  std::vector<GridPoint> ordered(grid.begin(), grid.end());
  std::stable_sort(ordered.begin(), ordered.end(), grid_less);

  const ScoreOn on = has_validation ? ScoreOn::kValidation : ScoreOn::kTraining;
  GridSearchResult<Model> result{};
  if (!has_validation) {
    result.used_training_fallback = true;
    result.warnings.push_back("empty validation set; grid search scored on training data");
  }
  bool have_best = false;
  for (const auto& point : ordered) {
    Model model = fit(point);
    const double s = score(model, on);
    result.trace.emplace_back(point, s);
    if (!have_best || s > result.score) {
      result.best = point;
      result.score = s;
      result.model = std::move(model);
      have_best = true;
    }
  }
  return result;
}

}  // namespace lexent
