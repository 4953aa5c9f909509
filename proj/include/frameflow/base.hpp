#ifndef FRAMEFLOW_BASE_HPP_
#define FRAMEFLOW_BASE_HPP_

#include <Eigen/Dense>

#include <stdexcept>

namespace frameflow {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Input for which the requested scaling or transform does not exist
/// (singular Gram matrix, zero vector, zero row or column).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN, overflow, or a step size that collapsed during integration.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked postcondition did not hold.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frameflow

#endif  // FRAMEFLOW_BASE_HPP_
