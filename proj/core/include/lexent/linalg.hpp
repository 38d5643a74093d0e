#pragma once

#include <Eigen/Dense>

namespace lexent {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Embedding tables are read row by row, so keep rows contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace lexent
