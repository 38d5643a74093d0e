#include <algorithm>
#include <random>

#include <Eigen/SVD>

#include "lexent/error.hpp"
#include "lexent/random.hpp"
#include "lexent/vecspace.hpp"

namespace lexent {
namespace {

void check_rank(Eigen::Index rows, Eigen::Index cols, std::size_t k) {
  const auto limit = static_cast<std::size_t>(std::min(rows, cols));
  if (k == 0 || k > limit) {
    throw InvalidArgument("truncated_svd: k = " + std::to_string(k) +
                          " must satisfy 1 <= k <= min(rows, cols) = " + std::to_string(limit));
  }
}

void fix_signs(SvdResult& r) {
  for (Eigen::Index j = 0; j < r.U.cols(); ++j) {
    Eigen::Index arg = 0;
    r.U.col(j).cwiseAbs().maxCoeff(&arg);
    if (r.U(arg, j) < 0.0) {
      r.U.col(j) *= -1.0;
      r.V.col(j) *= -1.0;
    }
  }
}

SvdResult take_leading(const Matrix& U, const Vector& s, const Matrix& V, std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  SvdResult r{U.leftCols(kk), s.head(kk), V.leftCols(kk)};
  fix_signs(r);
  return r;
}

SvdResult dense_svd(const Matrix& a, std::size_t k) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return take_leading(svd.matrixU(), svd.singularValues(), svd.matrixV(), k);
}

Matrix orthonormal_basis(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

// Randomized range finder with subspace (power) iterations; each power step
// is re-orthonormalized to keep the small singular directions from washing out.
template <typename MatrixType>
SvdResult randomized_svd(const MatrixType& a, std::size_t k, const SvdOptions& options) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const Eigen::Index width =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(k + options.oversample),
                             std::min(rows, cols));
  auto rng = make_rng(options.seed, "truncated_svd");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix omega(cols, width);
  for (Eigen::Index j = 0; j < width; ++j) {
    for (Eigen::Index i = 0; i < cols; ++i) omega(i, j) = normal(rng);
  }
  Matrix q = orthonormal_basis(a * omega);
  for (int it = 0; it < options.power_iterations; ++it) {
    const Matrix z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }
  const Matrix bt = a.transpose() * q;  // (Q^T A)^T, cols x width
  Eigen::BDCSVD<Matrix> small(bt, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // B^T = Ub S Vb^T  =>  B = Vb S Ub^T, so A ~ (Q Vb) S Ub^T.
  return take_leading(q * small.matrixV(), small.singularValues(), small.matrixU(), k);
}

}  // namespace

SvdResult truncated_svd(const Matrix& matrix, std::size_t k, const SvdOptions& options) {
  check_rank(matrix.rows(), matrix.cols(), k);
  if (static_cast<std::size_t>(std::min(matrix.rows(), matrix.cols())) <=
      options.dense_threshold) {
    return dense_svd(matrix, k);
  }
  return randomized_svd(matrix, k, options);
}

SvdResult truncated_svd(const Eigen::SparseMatrix<double>& matrix, std::size_t k,
                        const SvdOptions& options) {
  check_rank(matrix.rows(), matrix.cols(), k);
  if (static_cast<std::size_t>(std::min(matrix.rows(), matrix.cols())) <=
      options.dense_threshold) {
    return dense_svd(Matrix(matrix), k);
  }
  return randomized_svd(matrix, k, options);
}

SvdResult truncated_svd(const CountMatrix& matrix, std::size_t k, const SvdOptions& options) {
  return truncated_svd(matrix.to_sparse(), k, options);
}

}  // namespace lexent
