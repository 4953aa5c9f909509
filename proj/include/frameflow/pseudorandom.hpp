#ifndef FRAMEFLOW_PSEUDORANDOM_HPP_
#define FRAMEFLOW_PSEUDORANDOM_HPP_

#include "frameflow/core.hpp"

#include <cstddef>

namespace frameflow {

struct PseudorandomReport {
  double alpha = 0;
  double beta = 0;
  bool holds = false;
  double worst_column_max = 0;        // min over columns of the column maximum
  std::size_t worst_row_deficit = 0;  // max over rows of the number of entries below alpha
  bool strong_holds = false;          // rows: <= n/8000 entries below alpha; columns: <= m/8000
  std::size_t weak_columns = 0;       // columns with more than m/128000 entries below alpha
};

/// (alpha, beta)-pseudorandom: every column has an entry >= alpha and every
/// row has at least (1 - beta) n entries >= alpha.
template <typename Scalar>
PseudorandomReport certify_pseudorandom(const NonNegMatrix<Scalar>& b, Scalar alpha, Scalar beta) {
  if (!(alpha > Scalar(0))) throw std::invalid_argument("certify_pseudorandom: alpha must be positive");
  if (beta < Scalar(0) || beta > Scalar(1))
    throw std::invalid_argument("certify_pseudorandom: beta outside [0, 1]");
  const auto& a = b.entries();
  const Index m = a.rows(), n = a.cols();
  PseudorandomReport r;
  r.alpha = double(alpha);
  r.beta = double(beta);

  const auto below = (a.array() < alpha).template cast<Index>();
  const Eigen::Matrix<Index, Eigen::Dynamic, 1> row_low = below.rowwise().sum();
  const Eigen::Matrix<Index, Eigen::Dynamic, 1> col_low = below.colwise().sum().transpose();

  r.worst_column_max = double(a.colwise().maxCoeff().minCoeff());
  r.worst_row_deficit = std::size_t(row_low.maxCoeff());
  const double allowed_row_low = double(beta) * double(n);
  r.holds = r.worst_column_max >= double(alpha) && double(r.worst_row_deficit) <= allowed_row_low;

  r.strong_holds = double(row_low.maxCoeff()) <= double(n) / 8000.0 &&
                   double(col_low.maxCoeff()) <= double(m) / 8000.0;
  for (Index j = 0; j < n; ++j)
    if (double(col_low(j)) > double(m) / 128000.0) ++r.weak_columns;
  return r;
}

}  // namespace frameflow

#endif  // FRAMEFLOW_PSEUDORANDOM_HPP_
