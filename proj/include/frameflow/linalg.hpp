#ifndef FRAMEFLOW_LINALG_HPP_
#define FRAMEFLOW_LINALG_HPP_

#include "frameflow/base.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace frameflow {

template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;   // ascending
  MatrixX<Scalar> vectors;  // column i pairs with values(i)
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps until the
/// off-diagonal Frobenius mass is at most tol times the total Frobenius norm,
/// or until a sweep finds nothing above rounding level (tol = 0 asks for that).
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      typename Derived::Scalar tol = 1e-12,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  const Index n = input.rows();
  if (input.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix not square");
  MatrixX<Scalar> a = (input + input.transpose()) / Scalar(2);
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar total = a.norm();

  auto off_mass = [&]() {
    Scalar off = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) off += a(i, j) * a(i, j);
    return std::sqrt(off);
  };

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  int sweep = 0;
  bool rotated = true;
  while (rotated && sweep < max_sweeps && off_mass() > tol * total) {
    ++sweep;
    rotated = false;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (std::abs(apq) <= eps * Scalar(0.5) * (std::abs(a(p, p)) + std::abs(a(q, q))) &&
            std::abs(apq) <= eps * total) {
          a(p, q) = a(q, p) = Scalar(0);
          continue;
        }
        rotated = true;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) < a(j, j); });
  SymmetricEigen<Scalar> r;
  r.values.resize(n);
  r.vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    r.values(i) = a(order[i], order[i]);
    r.vectors.col(i) = v.col(order[i]);
  }
  r.sweeps = sweep;
  return r;
}

template <typename Derived>
VectorX<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  return jacobi_eigen(a).values;
}

/// A^p for symmetric positive semidefinite A. Eigenvalues at or below
/// cutoff * max are singular: an error for negative p, zeroed otherwise.
template <typename Derived>
MatrixX<typename Derived::Scalar> psd_power(const Eigen::MatrixBase<Derived>& a,
                                            typename Derived::Scalar p,
                                            typename Derived::Scalar cutoff = 1e-13) {
  using Scalar = typename Derived::Scalar;
  const auto eig = jacobi_eigen(a, Scalar(0));
  const Scalar top = eig.values.cwiseAbs().maxCoeff();
  VectorX<Scalar> w(eig.values.size());
  for (Index i = 0; i < w.size(); ++i) {
    const Scalar lam = eig.values(i);
    if (!(lam > cutoff * top)) {
      if (p < Scalar(0)) throw DegenerateInput("psd_power: singular matrix");
      w(i) = Scalar(0);
    } else {
      w(i) = std::pow(lam, p);
    }
  }
  return eig.vectors * w.asDiagonal() * eig.vectors.transpose();
}

template <typename Derived>
MatrixX<typename Derived::Scalar> inverse_sqrt_spd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return psd_power(a, Scalar(-0.5));
}

template <typename Derived>
MatrixX<typename Derived::Scalar> sqrt_psd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return psd_power(a, Scalar(0.5));
}

/// log |det A| for a general square matrix.
template <typename Derived>
typename Derived::Scalar log_abs_det(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0) return Scalar(0);
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(a.eval());
  return lu.matrixLU().diagonal().cwiseAbs().array().log().sum();
}

}  // namespace frameflow

#endif  // FRAMEFLOW_LINALG_HPP_
