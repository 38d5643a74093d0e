#include "lexent/svm.hpp"

#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "lexent/error.hpp"

namespace lexent {
namespace {

constexpr double kTau = 1e-12;

// Rows of Q_ij = y_i y_j K(x_i, x_j), computed on demand and kept in an LRU
// cache bounded by a byte budget.
class KernelRows {
 public:
  KernelRows(const Matrix& X, const std::vector<double>& y, double gamma, std::size_t megabytes)
      : X_(X), y_(y), gamma_(gamma), sq_norms_(X.rowwise().squaredNorm()) {
    const std::size_t row_bytes = sizeof(double) * static_cast<std::size_t>(X.rows());
    capacity_ = std::max<std::size_t>(2, megabytes * 1024 * 1024 / std::max<std::size_t>(1, row_bytes));
  }

  const std::vector<double>& row(std::size_t i) {
    auto it = rows_.find(i);
    if (it != rows_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
    if (rows_.size() >= capacity_) {
      rows_.erase(lru_.back());
      lru_.pop_back();
    }
    lru_.push_front(i);
    auto& slot = rows_[i];
    slot.second = lru_.begin();
    compute(i, slot.first);
    return slot.first;
  }

 private:
  void compute(std::size_t i, std::vector<double>& out) const {
    const auto ii = static_cast<Eigen::Index>(i);
    const Vector dots = X_ * X_.row(ii).transpose();
    out.resize(static_cast<std::size_t>(X_.rows()));
    for (Eigen::Index t = 0; t < X_.rows(); ++t) {
      const double d2 = std::max(0.0, sq_norms_(ii) + sq_norms_(t) - 2.0 * dots(t));
      out[static_cast<std::size_t>(t)] =
          y_[i] * y_[static_cast<std::size_t>(t)] * std::exp(-gamma_ * d2);
    }
  }

  const Matrix& X_;
  const std::vector<double>& y_;
  double gamma_;
  Vector sq_norms_;
  std::size_t capacity_;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>>
      rows_;
};

}  // namespace

double KernelModel::decision(const Vector& x) const {
  if (x.size() != support_vectors.cols()) {
    throw InvalidArgument("kernel model: feature dimension mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
    const double d2 = (support_vectors.row(i).transpose() - x).squaredNorm();
    const double y = support_labels[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
    sum += alphas(i) * y * std::exp(-gamma * d2);
  }
  return sum + intercept;
}

Vector KernelModel::decisions(const Matrix& X) const {
  Vector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = decision(X.row(i).transpose());
  return out;
}

KernelModel train_rbf_svm(const Matrix& X, std::span<const int> labels, const SvmOptions& options) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw InvalidArgument("label count does not match number of rows");
  }
  if (!(options.C > 0.0)) throw InvalidArgument("svm: C must be positive");
  const ClassWeights balanced = balanced_class_weights(labels);  // throws on one class
  const ClassWeights cw = options.balanced ? balanced : ClassWeights{};
  const double gamma = options.gamma > 0.0 ? options.gamma : 1.0 / std::max<Eigen::Index>(1, X.cols());

  const std::size_t n = labels.size();
  std::vector<double> y(n);
  std::vector<double> upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = labels[i] ? 1.0 : -1.0;
    upper[i] = options.C * cw.of(labels[i]);
  }
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  KernelRows Q(X, y, gamma, options.cache_megabytes);
  // K(x, x) = 1 for the RBF kernel, so Q_ii = 1.
  constexpr double kDiag = 1.0;

  auto at_upper = [&](std::size_t t) { return alpha[t] >= upper[t]; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  KernelModel model;
  long iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    // Working set: i maximizes the violation, j the second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!at_upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          i_sel = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!at_lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        i_sel = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i_sel < 0) {
      model.converged = true;
      break;
    }
    const auto i = static_cast<std::size_t>(i_sel);
    const std::vector<double>& Qi = Q.row(i);

    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::ptrdiff_t j_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (at_lower(t)) continue;
        const double grad_diff = gmax + grad[t];
        gmax2 = std::max(gmax2, grad[t]);
        if (grad_diff > 0.0) {
          double quad = kDiag + kDiag - 2.0 * y[i] * Qi[t];
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            best_obj = obj;
            j_sel = static_cast<std::ptrdiff_t>(t);
          }
        }
      } else {
        if (at_upper(t)) continue;
        const double grad_diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
        if (grad_diff > 0.0) {
          double quad = kDiag + kDiag + 2.0 * y[i] * Qi[t];
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            best_obj = obj;
            j_sel = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < options.tolerance || j_sel < 0) {
      model.converged = true;
      break;
    }
    const auto j = static_cast<std::size_t>(j_sel);
    const double qij = Qi[j];
    const double ci = upper[i];
    const double cj = upper[j];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];

    if (y[i] != y[j]) {
      double quad = kDiag + kDiag + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > ci - cj) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = ci - diff;
        }
      } else if (alpha[j] > cj) {
        alpha[j] = cj;
        alpha[i] = cj + diff;
      }
    } else {
      double quad = kDiag + kDiag - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > ci) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = sum - ci;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > cj) {
        if (alpha[j] > cj) {
          alpha[j] = cj;
          alpha[i] = sum - cj;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    // Row i is the most recently used entry, so fetching j cannot evict it.
    const std::vector<double>& Qj = Q.row(j);
    for (std::size_t t = 0; t < n; ++t) grad[t] += Qi[t] * dai + Qj[t] * daj;
  }

  // Intercept: average y_i G_i over free variables, midpoint of bounds otherwise.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t num_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (at_upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (at_lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++num_free;
      sum_free += yg;
    }
  }
  const double rho = num_free > 0 ? sum_free / static_cast<double>(num_free) : (ub + lb) / 2.0;

  std::vector<std::size_t> support;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) support.push_back(t);
  }
  model.support_vectors.resize(static_cast<Eigen::Index>(support.size()), X.cols());
  model.alphas.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    model.support_vectors.row(si) = X.row(static_cast<Eigen::Index>(support[s]));
    model.alphas(si) = alpha[support[s]];
    model.support_labels.push_back(labels[support[s]]);
  }
  model.intercept = -rho;
  model.gamma = gamma;
  model.C = options.C;
  model.class_weights = cw;
  model.iterations = iter;
  return model;
}

}  // namespace lexent
