#pragma once

#include <Eigen/Core>

namespace lorank {

using Index = Eigen::Index;

/// Dense n x r factor (U, V, or the Burer-Monteiro variable R). Row-major so
/// that row p of a factor is a contiguous length-r slice.
template <typename Scalar>
using Factor = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Factord = Factor<double>;
using Vectord = Vector<double>;
using DenseMatrixd = DenseMatrix<double>;

}  // namespace lorank
