#ifndef FRAMEFLOW_DISCRETE_SCALING_HPP_
#define FRAMEFLOW_DISCRETE_SCALING_HPP_

#include "frameflow/core.hpp"

#include <cstddef>

namespace frameflow {

/// Left/right transforms with their log-determinants. Diagonal transforms keep
/// exact zeros off the diagonal.
template <typename Scalar>
struct ScalingPair {
  MatrixX<Scalar> left;
  MatrixX<Scalar> right;
  bool left_diagonal = false;
  bool right_diagonal = false;
  Scalar left_logdet = 0;
  Scalar right_logdet = 0;

  static ScalingPair identity(Index m, Index n) {
    ScalingPair p;
    p.left = MatrixX<Scalar>::Identity(m, m);
    p.right = MatrixX<Scalar>::Identity(n, n);
    p.left_diagonal = p.right_diagonal = true;
    return p;
  }

  /// Diagonal pair from log-diagonals.
  static ScalingPair from_log_diagonals(const VectorX<Scalar>& log_x, const VectorX<Scalar>& log_y) {
    ScalingPair p;
    p.left = log_x.array().exp().matrix().asDiagonal();
    p.right = log_y.array().exp().matrix().asDiagonal();
    p.left_diagonal = p.right_diagonal = true;
    p.left_logdet = log_x.sum();
    p.right_logdet = log_y.sum();
    return p;
  }
};

struct IterationReport {
  std::size_t iterations = 0;
  double final_delta = 0;
  bool converged = false;
};

constexpr std::size_t kDefaultMaxIters = 100000;

template <typename Scalar>
struct SinkhornResult {
  NonNegMatrix<Scalar> scaled;
  ScalingPair<Scalar> scaling;
  VectorX<Scalar> log_x, log_y;  // log-diagonals of the scaling
  IterationReport report;
};

template <typename Scalar>
struct OperatorScalingResult {
  OperatorTuple<Scalar> scaled;
  ScalingPair<Scalar> scaling;
  IterationReport report;
};

template <typename Scalar>
struct FrameScalingResult {
  Frame<Scalar> scaled;
  IterationReport report;
};

// ---------------------------------------------------------------------------
// Sinkhorn

/// Scales every row to sum s/m. Returns the log row factors.
template <typename Scalar>
VectorX<Scalar> sinkhorn_row_pass(MatrixX<Scalar>& b, Scalar s) {
  const VectorX<Scalar> r = b.rowwise().sum();
  const VectorX<Scalar> f = (s / Scalar(b.rows())) * r.cwiseInverse();
  b = f.asDiagonal() * b;
  return f.array().log().matrix();
}

/// Scales every column to sum s/n. Returns the log column factors.
template <typename Scalar>
VectorX<Scalar> sinkhorn_column_pass(MatrixX<Scalar>& b, Scalar s) {
  const VectorX<Scalar> c = b.colwise().sum().transpose();
  const VectorX<Scalar> g = (s / Scalar(b.cols())) * c.cwiseInverse();
  b = b * g.asDiagonal();
  return g.array().log().matrix();
}

/// Alternating row/column normalization. Row passes set row sums to s/m and
/// column passes set column sums to s/n, so the size is kept.
template <typename Scalar>
SinkhornResult<Scalar> sinkhorn(const NonNegMatrix<Scalar>& a, Scalar tol,
                                std::size_t max_iters = kDefaultMaxIters) {
  if (!(tol > Scalar(0))) throw std::invalid_argument("sinkhorn: tol must be positive");
  if ((a.row_sums().array() <= Scalar(0)).any() || (a.col_sums().array() <= Scalar(0)).any())
    throw DegenerateInput("sinkhorn: zero row or column");

  const Scalar s = size_of(a);
  MatrixX<Scalar> b = a.entries();
  VectorX<Scalar> log_x = VectorX<Scalar>::Zero(a.m());
  VectorX<Scalar> log_y = VectorX<Scalar>::Zero(a.n());
  IterationReport rep;
  Scalar delta = delta_of(a);
  while (delta > tol && rep.iterations < max_iters) {
    log_x += sinkhorn_row_pass(b, s);
    log_y += sinkhorn_column_pass(b, s);
    ++rep.iterations;
    delta = delta_of(NonNegMatrix<Scalar>(b));
  }
  rep.final_delta = delta;
  rep.converged = delta <= tol;
  return {NonNegMatrix<Scalar>(std::move(b)), ScalingPair<Scalar>::from_log_diagonals(log_x, log_y),
          log_x, log_y, rep};
}

// ---------------------------------------------------------------------------
// operator scaling

namespace detail {

template <typename Scalar>
bool is_exactly_diagonal(const MatrixX<Scalar>& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j && a(i, j) != Scalar(0)) return false;
  return true;
}

}  // namespace detail

/// One left step: V_i <- (sum V V^T)^{-1/2} V_i, so that sum V V^T = I_m.
/// Returns the applied transform.
template <typename Scalar>
MatrixX<Scalar> operator_left_step(std::vector<MatrixX<Scalar>>& mats) {
  MatrixX<Scalar> l = MatrixX<Scalar>::Zero(mats.front().rows(), mats.front().rows());
  for (const auto& v : mats) l.noalias() += v * v.transpose();
  const MatrixX<Scalar> p = inverse_sqrt_spd(l);
  for (auto& v : mats) v = p * v;
  return p;
}

/// One right step: V_i <- V_i ((n/m) sum V^T V)^{-1/2}, so that
/// sum V^T V = (m/n) I_n. Returns the applied transform.
template <typename Scalar>
MatrixX<Scalar> operator_right_step(std::vector<MatrixX<Scalar>>& mats) {
  const Index m = mats.front().rows(), n = mats.front().cols();
  MatrixX<Scalar> r = MatrixX<Scalar>::Zero(n, n);
  for (const auto& v : mats) r.noalias() += v.transpose() * v;
  const MatrixX<Scalar> q = inverse_sqrt_spd((Scalar(n) / Scalar(m)) * r);
  for (auto& v : mats) v = v * q;
  return q;
}

/// Alternating operator scaling. The result is V_i = L U_i R with L, R
/// accumulated; after each double step sum V^T V = (m/n) I exactly, and
/// convergence is declared when Delta(V) <= tol.
template <typename Scalar>
OperatorScalingResult<Scalar> operator_sinkhorn(const OperatorTuple<Scalar>& u, Scalar tol,
                                                std::size_t max_iters = kDefaultMaxIters) {
  if (!(tol > Scalar(0))) throw std::invalid_argument("operator_sinkhorn: tol must be positive");
  std::vector<MatrixX<Scalar>> mats = u.mats();
  auto scaling = ScalingPair<Scalar>::identity(u.m(), u.n());
  IterationReport rep;
  Scalar delta = delta_of(u);
  while (delta > tol && rep.iterations < max_iters) {
    const MatrixX<Scalar> p = operator_left_step(mats);
    scaling.left = p * scaling.left;
    scaling.left_logdet += log_abs_det(p);
    const MatrixX<Scalar> q = operator_right_step(mats);
    scaling.right = scaling.right * q;
    scaling.right_logdet += log_abs_det(q);
    ++rep.iterations;
    delta = delta_of(OperatorTuple<Scalar>(mats));
  }
  scaling.left_diagonal = detail::is_exactly_diagonal(scaling.left);
  scaling.right_diagonal = detail::is_exactly_diagonal(scaling.right);
  rep.final_delta = delta;
  rep.converged = delta <= tol;
  return {OperatorTuple<Scalar>(std::move(mats)), std::move(scaling), rep};
}

// ---------------------------------------------------------------------------
// frame scaling

/// u_i <- S^{-1/2} u_i.
template <typename Scalar>
void frame_parseval_step(MatrixX<Scalar>& v) {
  const MatrixX<Scalar> s = v * v.transpose();
  v = inverse_sqrt_spd(s) * v;
}

/// u_i <- sqrt(d/n) u_i / |u_i|.
template <typename Scalar>
void frame_equal_norm_step(MatrixX<Scalar>& v) {
  const VectorX<Scalar> norms = v.colwise().norm().transpose();
  if ((norms.array() <= Scalar(0)).any()) throw DegenerateInput("frame_alternating: zero vector");
  const Scalar c = std::sqrt(Scalar(v.rows()) / Scalar(v.cols()));
  v = v * (c * norms.cwiseInverse()).asDiagonal();
}

/// Alternates the Parseval and equal-norm normalizations; Delta is measured
/// after each double step.
template <typename Scalar>
FrameScalingResult<Scalar> frame_alternating(const Frame<Scalar>& f, Scalar tol,
                                             std::size_t max_iters = kDefaultMaxIters) {
  if (!(tol > Scalar(0))) throw std::invalid_argument("frame_alternating: tol must be positive");
  MatrixX<Scalar> v = f.vectors();
  if ((v.colwise().squaredNorm().array() <= Scalar(0)).any())
    throw DegenerateInput("frame_alternating: zero vector");
  IterationReport rep;
  Scalar delta = delta_of(f);
  while (delta > tol && rep.iterations < max_iters) {
    frame_parseval_step(v);
    frame_equal_norm_step(v);
    ++rep.iterations;
    delta = delta_of(Frame<Scalar>(v));
  }
  rep.final_delta = delta;
  rep.converged = delta <= tol;
  return {Frame<Scalar>(std::move(v)), rep};
}

}  // namespace frameflow

#endif  // FRAMEFLOW_DISCRETE_SCALING_HPP_
