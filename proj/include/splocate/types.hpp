#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <stdexcept>
#include <string>

namespace splocate {

/// Points live in R^2 or R^3; the max-size bound keeps them off the heap.
template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;
using Point = PointT<double>;

/// Barycentric tuples and multi-indices carry d+1 <= 4 entries.
template <typename Scalar>
using BaryT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 4, 1>;
using Bary = BaryT<double>;
using MultiIndex = Eigen::Matrix<int, Eigen::Dynamic, 1, 0, 4, 1>;

/// Small d x d matrix (velocity Jacobians, J(k, l) = d u_k / d x_l).
using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace splocate
