#pragma once

#include <Eigen/Dense>

namespace hlds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Row-major storage for sequences of vectors (one row per time step) so each
/// step is a contiguous span for the SIMD kernels.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace hlds
