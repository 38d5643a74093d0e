#pragma once

#include <span>
#include <vector>

#include "lexent/linalg.hpp"
#include "lexent/logreg.hpp"

namespace lexent {

struct SvmOptions {
  double C = 1.0;
  // <= 0 means 1 / feature_dim.
  double gamma = 0.0;
  bool balanced = true;
  // Maximal KKT violation at termination.
  double tolerance = 1e-3;
  long max_iterations = 10'000'000;
  std::size_t cache_megabytes = 256;
};

// Soft-margin SVM with an RBF kernel exp(-gamma |x - x'|^2).
struct KernelModel {
  Matrix support_vectors;   // one row per support vector
  Vector alphas;            // dual variables, 0 < alpha_i <= C * class weight
  std::vector<int> support_labels;  // 0/1
  double intercept = 0.0;
  double gamma = 0.0;
  double C = 1.0;
  ClassWeights class_weights;
  long iterations = 0;
  bool converged = false;

  double decision(const Vector& x) const;
  bool predict(const Vector& x) const { return decision(x) >= 0.0; }
  Vector decisions(const Matrix& X) const;
  std::size_t input_dim() const { return static_cast<std::size_t>(support_vectors.cols()); }
};

// SMO with second-order working-set selection. Per-class box constraints are
// C times the (optionally balanced) class weight.
KernelModel train_rbf_svm(const Matrix& X, std::span<const int> labels,
                          const SvmOptions& options = {});

}  // namespace lexent
