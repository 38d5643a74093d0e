#pragma once

#include <span>

#include "lexent/linalg.hpp"

namespace lexent {

struct ClassWeights {
  double negative = 1.0;
  double positive = 1.0;

  double of(int label) const { return label ? positive : negative; }
};

// N / (2 N_c) per class. Throws on single-class input.
ClassWeights balanced_class_weights(std::span<const int> labels);

struct LogRegOptions {
  double C = 1.0;
  bool balanced = true;
  double gradient_tolerance = 1e-6;
  int max_iterations = 1000;
  int history = 10;
};

// A linear decision function; positive iff weights.x + intercept >= 0.
struct LinearModel {
  Vector weights;
  double intercept = 0.0;
  double C = 1.0;
  ClassWeights class_weights;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;

  double decision(const Vector& x) const { return weights.dot(x) + intercept; }
  bool predict(const Vector& x) const { return decision(x) >= 0.0; }
  Vector decisions(const Matrix& X) const;
};

struct LogisticObjective {
  double value = 0.0;
  Vector gradient;  // over [weights..., intercept]
};

// 0.5 |w|^2 + C sum_i s_i log(1 + exp(-y_i (w.x_i + b))), y_i in {-1, +1},
// s_i the class weight. The intercept is not regularized.
LogisticObjective logistic_objective(const Vector& params, const Matrix& X,
                                     std::span<const int> labels, double C,
                                     const ClassWeights& weights);

// L-BFGS with a backtracking Armijo line search. Stops when the gradient norm
// drops below the tolerance or after max_iterations (`converged` tells which).
LinearModel train_logreg(const Matrix& X, std::span<const int> labels,
                         const LogRegOptions& options = {});

}  // namespace lexent
