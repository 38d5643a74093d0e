#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Svd jacobi_svd(const Dense& a) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  // Work on columns of A (m x n) and accumulate V (n x n).
  std::vector<std::vector<double>> col(n, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) col[j][i] = a[i][j];
  }
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(col[p], col[p]);
        const double beta = dot(col[q], col[q]);
        const double gamma = dot(col[p], col[q]);
        if (gamma == 0.0 || alpha == 0.0 || beta == 0.0) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = col[p][i];
          const double y = col[q][i];
          col[p][i] = c * x - s * y;
          col[q][i] = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double x = v[p][i];
          const double y = v[q][i];
          v[p][i] = c * x - s * y;
          v[q][i] = s * x + c * y;
        }
      }
    }
    if (off < 1e-15) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(dot(col[j], col[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Svd out;
  out.U.assign(m, std::vector<double>(n, 0.0));
  out.V.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = order[r];
    out.s.push_back(norms[j]);
    for (std::size_t i = 0; i < m; ++i) out.U[i][r] = norms[j] > 0 ? col[j][i] / norms[j] : 0.0;
    for (std::size_t i = 0; i < n; ++i) out.V[i][r] = v[j][i];
  }
  return out;
}

double truncation_error(const std::vector<double>& s, std::size_t k) {
  double tail = 0.0;
  for (std::size_t i = k; i < s.size(); ++i) tail += s[i] * s[i];
  return std::sqrt(tail);
}

Dense ppmi(const Dense& counts) {
  const std::size_t m = counts.size();
  const std::size_t n = m ? counts[0].size() : 0;
  double total = 0.0;
  std::vector<double> row(m, 0.0), colsum(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      total += counts[i][j];
      row[i] += counts[i][j];
      colsum[j] += counts[i][j];
    }
  }
  Dense out(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (counts[i][j] <= 0.0) continue;
      const double pwc = counts[i][j] / total;
      const double pw = row[i] / total;
      const double pc = colsum[j] / total;
      out[i][j] = std::max(0.0, std::log(pwc / (pw * pc)));
    }
  }
  return out;
}

double f1(const std::vector<int>& predicted, const std::vector<int>& gold) {
  if (predicted.size() != gold.size()) throw std::invalid_argument("length mismatch");
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i] && gold[i]) ++tp;
    if (predicted[i] && !gold[i]) ++fp;
    if (!predicted[i] && gold[i]) ++fn;
  }
  if (tp + fp == 0 || tp + fn == 0) return 0.0;
  const double precision = tp / (tp + fp);
  const double recall = tp / (tp + fn);
  if (precision + recall == 0) return 0.0;
  return 2 * precision * recall / (precision + recall);
}

std::pair<double, double> best_threshold(const std::vector<double>& sims, const std::vector<int>& labels) {
  std::vector<double> sorted = sims;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> candidates{sorted.front() - 1.0};
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) candidates.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  double best_t = 0.0, best_f = -1.0;
  for (double t : candidates) {
    std::vector<int> pred(sims.size());
    for (std::size_t i = 0; i < sims.size(); ++i) pred[i] = sims[i] >= t;
    const double f = f1(pred, labels);
    if (f > best_f || (f == best_f && t < best_t)) {
      best_f = f;
      best_t = t;
    }
  }
  return {best_t, best_f};
}

std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

double logistic_loss(const std::vector<double>& params, const Dense& X, const std::vector<int>& labels,
                     double C, double weight_negative, double weight_positive) {
  const std::size_t d = params.size() - 1;
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) reg += params[j] * params[j];
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double z = params[d];
    for (std::size_t j = 0; j < d; ++j) z += params[j] * X[i][j];
    const double y = labels[i] ? 1.0 : -1.0;
    const double s = labels[i] ? weight_positive : weight_negative;
    loss += s * std::log1p(std::exp(-y * z));
  }
  return 0.5 * reg + C * loss;
}

std::vector<Ranked> nearest(const Dense& rows, const std::vector<std::string>& tokens,
                            const std::vector<double>& query, std::size_t top_k) {
  const double qn = std::sqrt(dot(query, query));
  std::vector<Ranked> all;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double rn = std::sqrt(dot(rows[i], rows[i]));
    if (rn == 0.0) continue;
    all.push_back({tokens[i], dot(rows[i], query) / (rn * qn)});
  }
  std::vector<Ranked> out;
  while (out.size() < top_k && !all.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < all.size(); ++i) {
      if (all[i].cosine > all[best].cosine ||
          (all[i].cosine == all[best].cosine && all[i].token < all[best].token)) {
        best = i;
      }
    }
    out.push_back(all[best]);
    all.erase(all.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace oracle
