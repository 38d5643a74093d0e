#pragma once

#include <span>

namespace lexent {

struct CosineThreshold {
  double threshold = 0.0;
  double train_f1 = 0.0;

  bool predict(double similarity) const { return similarity >= threshold; }
};

// Scans a threshold below the smallest similarity and the midpoints between
// consecutive distinct sorted similarities, keeping the lowest threshold that
// maximizes training F1. Throws if there are no positives.
CosineThreshold fit_cosine_threshold(std::span<const double> similarities,
                                     std::span<const int> labels);

}  // namespace lexent
