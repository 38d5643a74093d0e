#include "lexent/logreg.hpp"

#include <cmath>
#include <deque>

#include "lexent/error.hpp"

namespace lexent {
namespace {

void check_labels(const Matrix& X, std::span<const int> labels) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw InvalidArgument("label count does not match number of rows");
  }
}

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m) {
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// 1 / (1 + exp(m))
double sigmoid_neg(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

ClassWeights balanced_class_weights(std::span<const int> labels) {
  std::size_t pos = 0;
  for (int y : labels) pos += y ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw InvalidArgument("degenerate labels");
  const double n = static_cast<double>(labels.size());
  return {n / (2.0 * static_cast<double>(neg)), n / (2.0 * static_cast<double>(pos))};
}

Vector LinearModel::decisions(const Matrix& X) const {
  if (X.rows() == 0) return Vector(0);
  if (X.cols() != weights.size()) throw InvalidArgument("linear model: feature dimension mismatch");
  return (X * weights).array() + intercept;
}

LogisticObjective logistic_objective(const Vector& params, const Matrix& X,
                                     std::span<const int> labels, double C,
                                     const ClassWeights& weights) {
  check_labels(X, labels);
  const Eigen::Index d = X.cols();
  const auto w = params.head(d);
  const double b = params(d);
  const Vector z = (X * w).array() + b;

  LogisticObjective out;
  out.value = 0.5 * w.squaredNorm();
  Vector dz(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    const double y = label ? 1.0 : -1.0;
    const double s = weights.of(label);
    const double m = y * z(i);
    out.value += C * s * log1p_exp_neg(m);
    dz(i) = -C * s * y * sigmoid_neg(m);
  }
  out.gradient.resize(d + 1);
  out.gradient.head(d) = w + X.transpose() * dz;
  out.gradient(d) = dz.sum();
  return out;
}

LinearModel train_logreg(const Matrix& X, std::span<const int> labels,
                         const LogRegOptions& options) {
  check_labels(X, labels);
  if (!(options.C > 0.0)) throw InvalidArgument("logistic regression: C must be positive");
  ClassWeights cw;
  if (options.balanced) {
    cw = balanced_class_weights(labels);
  } else {
    balanced_class_weights(labels);  // still rejects single-class input
  }

  const Eigen::Index dim = X.cols() + 1;
  Vector theta = Vector::Zero(dim);
  LogisticObjective obj = logistic_objective(theta, X, labels, options.C, cw);

  std::deque<std::pair<Vector, Vector>> memory;  // (s, y)
  LinearModel model;
  model.C = options.C;
  model.class_weights = cw;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (obj.gradient.norm() < options.gradient_tolerance) {
      model.converged = true;
      break;
    }
    // Two-loop recursion.
    Vector q = obj.gradient;
    std::vector<double> alpha(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      alpha[m] = s.dot(q) / y.dot(s);
      q -= alpha[m] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.squaredNorm();
    } else {
      q /= std::max(1.0, obj.gradient.norm());
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[m] - beta) * s;
    }
    Vector direction = -q;
    double slope = obj.gradient.dot(direction);
    if (!(slope < 0.0)) {
      memory.clear();
      direction = -obj.gradient / std::max(1.0, obj.gradient.norm());
      slope = obj.gradient.dot(direction);
    }

    double step = 1.0;
    LogisticObjective next;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      next = logistic_objective(theta + step * direction, X, labels, options.C, cw);
      if (next.value <= obj.value + 1e-4 * step * slope && next.value < obj.value) {
        accepted = true;
        break;
      }
      // Near the optimum the objective stops resolving the decrease; fall back
      // to requiring a smaller gradient.
      if (std::abs(next.value - obj.value) <= 1e-13 * std::max(1.0, std::abs(obj.value)) &&
          next.gradient.norm() < obj.gradient.norm()) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further decrease representable

    Vector s = step * direction;
    Vector y = next.gradient - obj.gradient;
    theta += s;
    obj = std::move(next);
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(std::move(s), std::move(y));
      if (memory.size() > static_cast<std::size_t>(options.history)) memory.pop_front();
    }
  }
  if (!model.converged && obj.gradient.norm() < options.gradient_tolerance) model.converged = true;

  model.weights = theta.head(X.cols());
  model.intercept = theta(X.cols());
  model.iterations = iter;
  model.gradient_norm = obj.gradient.norm();
  return model;
}

}  // namespace lexent
