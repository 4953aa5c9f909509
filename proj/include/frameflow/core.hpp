#ifndef FRAMEFLOW_CORE_HPP_
#define FRAMEFLOW_CORE_HPP_

#include "frameflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace frameflow {

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace detail

/// n vectors in R^d stored as the columns of a d x n matrix.
template <typename Scalar>
class Frame {
 public:
  using Matrix = MatrixX<Scalar>;

  Frame() = default;
  explicit Frame(Matrix vectors) : vectors_(std::move(vectors)) {
    if (vectors_.rows() < 1 || vectors_.cols() < 1)
      throw std::invalid_argument("Frame: d and n must be positive");
    detail::require_finite(vectors_, "Frame");
  }

  Index d() const { return vectors_.rows(); }
  Index n() const { return vectors_.cols(); }
  const Matrix& vectors() const { return vectors_; }
  auto vector(Index j) const { return vectors_.col(j); }

 private:
  Matrix vectors_;
};

/// k real m x n matrices U_1..U_k.
template <typename Scalar>
class OperatorTuple {
 public:
  using Matrix = MatrixX<Scalar>;

  OperatorTuple() = default;
  explicit OperatorTuple(std::vector<Matrix> mats) : mats_(std::move(mats)) {
    if (mats_.empty()) throw std::invalid_argument("OperatorTuple: k must be positive");
    const Index m = mats_.front().rows(), n = mats_.front().cols();
    if (m < 1 || n < 1) throw std::invalid_argument("OperatorTuple: m and n must be positive");
    for (const auto& u : mats_) {
      if (u.rows() != m || u.cols() != n)
        throw std::invalid_argument("OperatorTuple: matrices differ in shape");
      detail::require_finite(u, "OperatorTuple");
    }
  }

  Index m() const { return mats_.front().rows(); }
  Index n() const { return mats_.front().cols(); }
  Index k() const { return static_cast<Index>(mats_.size()); }
  const std::vector<Matrix>& mats() const { return mats_; }
  const Matrix& operator[](Index i) const { return mats_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<Matrix> mats_;
};

/// Entrywise nonnegative m x n matrix. Entries in [-1e-15, 0) are clamped to 0.
template <typename Scalar>
class NonNegMatrix {
 public:
  using Matrix = MatrixX<Scalar>;

  static constexpr double kClamp = 1e-15;

  NonNegMatrix() = default;
  explicit NonNegMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1)
      throw std::invalid_argument("NonNegMatrix: m and n must be positive");
    detail::require_finite(entries_, "NonNegMatrix");
    for (Index j = 0; j < entries_.cols(); ++j)
      for (Index i = 0; i < entries_.rows(); ++i) {
        Scalar& a = entries_(i, j);
        if (a < Scalar(0)) {
          if (a < Scalar(-kClamp)) throw std::invalid_argument("NonNegMatrix: negative entry");
          a = Scalar(0);
        }
      }
  }

  Index m() const { return entries_.rows(); }
  Index n() const { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }
  Scalar operator()(Index i, Index j) const { return entries_(i, j); }
  VectorX<Scalar> row_sums() const { return entries_.rowwise().sum(); }
  VectorX<Scalar> col_sums() const { return entries_.colwise().sum().transpose(); }

 private:
  Matrix entries_;
};

template <typename Scalar>
struct Measures {
  Scalar s = 0;
  Scalar delta = 0;
  Scalar eps = 0;
};

using Framed = Frame<double>;
using OperatorTupled = OperatorTuple<double>;
using NonNegMatrixd = NonNegMatrix<double>;

// ---------------------------------------------------------------------------
// Gram aggregates

/// S = sum_i u_i u_i^T.
template <typename Scalar>
MatrixX<Scalar> frame_operator(const Frame<Scalar>& f) {
  return f.vectors() * f.vectors().transpose();
}

/// B_m = sum_i U_i U_i^T.
template <typename Scalar>
MatrixX<Scalar> left_gram(const OperatorTuple<Scalar>& u) {
  MatrixX<Scalar> b = MatrixX<Scalar>::Zero(u.m(), u.m());
  for (const auto& x : u.mats()) b.noalias() += x * x.transpose();
  return b;
}

/// B_n = sum_i U_i^T U_i.
template <typename Scalar>
MatrixX<Scalar> right_gram(const OperatorTuple<Scalar>& u) {
  MatrixX<Scalar> b = MatrixX<Scalar>::Zero(u.n(), u.n());
  for (const auto& x : u.mats()) b.noalias() += x.transpose() * x;
  return b;
}

// ---------------------------------------------------------------------------
// size

template <typename Scalar>
Scalar size_of(const Frame<Scalar>& f) {
  return f.vectors().squaredNorm();
}

template <typename Scalar>
Scalar size_of(const OperatorTuple<Scalar>& u) {
  Scalar s = 0;
  for (const auto& x : u.mats()) s += x.squaredNorm();
  return s;
}

template <typename Scalar>
Scalar size_of(const NonNegMatrix<Scalar>& a) {
  return a.entries().sum();
}

// ---------------------------------------------------------------------------
// Delta

/// (1/m) tr((sI - m B_m)^2) + (1/n) tr((sI - n B_n)^2) given the two Gram matrices.
template <typename Scalar>
Scalar delta_from_grams(const MatrixX<Scalar>& bm, const MatrixX<Scalar>& bn, Scalar s) {
  const Index m = bm.rows(), n = bn.rows();
  MatrixX<Scalar> cm = -Scalar(m) * bm;
  cm.diagonal().array() += s;
  MatrixX<Scalar> cn = -Scalar(n) * bn;
  cn.diagonal().array() += s;
  return cm.squaredNorm() / Scalar(m) + cn.squaredNorm() / Scalar(n);
}

template <typename Scalar>
Scalar delta_of(const Frame<Scalar>& f) {
  const Index d = f.d(), n = f.n();
  const MatrixX<Scalar> S = frame_operator(f);
  const Scalar s = S.trace();
  MatrixX<Scalar> cm = -Scalar(d) * S;
  cm.diagonal().array() += s;
  const VectorX<Scalar> norms = f.vectors().colwise().squaredNorm().transpose();
  const Scalar col = (s - Scalar(n) * norms.array()).square().sum();
  return cm.squaredNorm() / Scalar(d) + col / Scalar(n);
}

template <typename Scalar>
Scalar delta_of(const OperatorTuple<Scalar>& u) {
  const MatrixX<Scalar> bm = left_gram(u);
  return delta_from_grams(bm, right_gram(u), bm.trace());
}

template <typename Scalar>
Scalar delta_of(const NonNegMatrix<Scalar>& a) {
  const Scalar s = size_of(a);
  const Index m = a.m(), n = a.n();
  const Scalar rows = (s - Scalar(m) * a.row_sums().array()).square().sum();
  const Scalar cols = (s - Scalar(n) * a.col_sums().array()).square().sum();
  return rows / Scalar(m) + cols / Scalar(n);
}

// ---------------------------------------------------------------------------
// distance

template <typename Scalar>
Scalar dist(const Frame<Scalar>& a, const Frame<Scalar>& b) {
  if (a.d() != b.d() || a.n() != b.n()) throw std::invalid_argument("dist: shape mismatch");
  return (a.vectors() - b.vectors()).squaredNorm();
}

template <typename Scalar>
Scalar dist(const OperatorTuple<Scalar>& a, const OperatorTuple<Scalar>& b) {
  if (a.m() != b.m() || a.n() != b.n() || a.k() != b.k())
    throw std::invalid_argument("dist: shape mismatch");
  Scalar total = 0;
  for (Index i = 0; i < a.k(); ++i) total += (a[i] - b[i]).squaredNorm();
  return total;
}

template <typename T>
auto distance(const T& a, const T& b) {
  using std::sqrt;
  return sqrt(dist(a, b));
}

// ---------------------------------------------------------------------------
// eps-nearness

namespace detail {

template <typename Scalar>
Scalar two_sided_violation(Scalar lo, Scalar hi, Scalar target) {
  return std::max({Scalar(0), hi / target - Scalar(1), Scalar(1) - lo / target});
}

}  // namespace detail

/// Smallest eps with (1-eps)I <= S <= (1+eps)I and (1-eps)d/n <= |u_i|^2 <= (1+eps)d/n.
template <typename Scalar>
Scalar eps_nearness(const Frame<Scalar>& f) {
  const VectorX<Scalar> ev = symmetric_eigenvalues(frame_operator(f));
  const VectorX<Scalar> norms = f.vectors().colwise().squaredNorm().transpose();
  const Scalar target = Scalar(f.d()) / Scalar(f.n());
  return std::max(detail::two_sided_violation(ev.minCoeff(), ev.maxCoeff(), Scalar(1)),
                  detail::two_sided_violation(norms.minCoeff(), norms.maxCoeff(), target));
}

/// Smallest eps with (1-eps)I <= B_m <= (1+eps)I and (1-eps)(m/n)I <= B_n <= (1+eps)(m/n)I.
template <typename Scalar>
Scalar eps_nearness(const OperatorTuple<Scalar>& u) {
  const VectorX<Scalar> em = symmetric_eigenvalues(left_gram(u));
  const VectorX<Scalar> en = symmetric_eigenvalues(right_gram(u));
  const Scalar target = Scalar(u.m()) / Scalar(u.n());
  return std::max(detail::two_sided_violation(em.minCoeff(), em.maxCoeff(), Scalar(1)),
                  detail::two_sided_violation(en.minCoeff(), en.maxCoeff(), target));
}

template <typename T>
auto measures(const T& obj) {
  using Scalar = decltype(size_of(obj));
  Measures<Scalar> r;
  r.s = size_of(obj);
  r.delta = delta_of(obj);
  if constexpr (!std::is_same_v<T, NonNegMatrix<Scalar>>) r.eps = eps_nearness(obj);
  return r;
}

// ---------------------------------------------------------------------------
// predicates

template <typename T, typename Scalar>
bool is_doubly_balanced(const T& obj, Scalar tol) {
  return delta_of(obj) <= tol;
}

template <typename Scalar>
bool is_doubly_stochastic(const Frame<Scalar>& f, Scalar tol) {
  return delta_of(f) <= tol && std::abs(size_of(f) - Scalar(f.d())) <= tol;
}

template <typename Scalar>
bool is_doubly_stochastic(const OperatorTuple<Scalar>& u, Scalar tol) {
  return delta_of(u) <= tol && std::abs(size_of(u) - Scalar(u.m())) <= tol;
}

/// Unit row sums.
template <typename Scalar>
bool is_doubly_stochastic(const NonNegMatrix<Scalar>& a, Scalar tol) {
  return delta_of(a) <= tol && std::abs(size_of(a) - Scalar(a.m())) <= tol;
}

// ---------------------------------------------------------------------------
// conversions

/// U_i is d x n with u_i in column i and zeros elsewhere.
template <typename Scalar>
OperatorTuple<Scalar> frame_to_operator(const Frame<Scalar>& f) {
  std::vector<MatrixX<Scalar>> mats;
  mats.reserve(static_cast<std::size_t>(f.n()));
  for (Index i = 0; i < f.n(); ++i) {
    MatrixX<Scalar> u = MatrixX<Scalar>::Zero(f.d(), f.n());
    u.col(i) = f.vector(i);
    mats.push_back(std::move(u));
  }
  return OperatorTuple<Scalar>(std::move(mats));
}

template <typename Derived>
NonNegMatrix<typename Derived::Scalar> hadamard_square(const Eigen::MatrixBase<Derived>& a) {
  return NonNegMatrix<typename Derived::Scalar>(a.array().square().matrix());
}

/// Multiplies every vector by the same factor so that the size becomes `target`.
template <typename Scalar>
Frame<Scalar> rescale_to_size(const Frame<Scalar>& f, Scalar target) {
  const Scalar s = size_of(f);
  if (!(s > Scalar(0))) throw DegenerateInput("rescale_to_size: zero frame");
  return Frame<Scalar>(f.vectors() * std::sqrt(target / s));
}

template <typename Scalar>
OperatorTuple<Scalar> rescale_to_size(const OperatorTuple<Scalar>& u, Scalar target) {
  const Scalar s = size_of(u);
  if (!(s > Scalar(0))) throw DegenerateInput("rescale_to_size: zero operator");
  const Scalar c = std::sqrt(target / s);
  std::vector<MatrixX<Scalar>> mats;
  for (const auto& x : u.mats()) mats.push_back(c * x);
  return OperatorTuple<Scalar>(std::move(mats));
}

}  // namespace frameflow

#endif  // FRAMEFLOW_CORE_HPP_
