#ifndef FRAMEFLOW_CAPACITY_HPP_
#define FRAMEFLOW_CAPACITY_HPP_

#include "frameflow/discrete_scaling.hpp"
#include "frameflow/pseudorandom.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace frameflow {

enum class CapacityMethod { scaling_based, convex_descent, zero_detected, bracket_only };

inline const char* to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::scaling_based: return "scaling-based";
    case CapacityMethod::convex_descent: return "convex-descent";
    case CapacityMethod::zero_detected: return "zero-detected";
    case CapacityMethod::bracket_only: return "bracket-only";
  }
  return "unknown";
}

/// Rows X' and columns Y' of a square support with |X'| + |Y'| > side and
/// no nonzero entry in X' x Y'. Indices are 0-based.
struct HallCertificate {
  std::vector<Index> rows;
  std::vector<Index> cols;
  Index side = 0;
};

template <typename Scalar>
struct CapacityResult {
  Scalar value = 0;
  CapacityMethod method = CapacityMethod::scaling_based;
  std::optional<HallCertificate> certificate;
  Scalar lower = 0;  // bracket from capacity_bounds
  Scalar upper = 0;
  bool converged = true;
  std::size_t iterations = 0;
};

template <typename Scalar>
struct CapacityBounds {
  Scalar lower = 0;
  Scalar upper = 0;
};

template <typename Scalar>
struct DescentResult {
  Scalar value = 0;      // exp of the minimum, 0 on divergence
  Scalar log_value = 0;  // the minimum
  VectorX<Scalar> minimizer;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
  bool stalled = false;    // stopped at the rounding floor above grad_tol
  Scalar grad_norm = 0;    // infinity norm at exit

  /// Converged, or stalled with a gradient small enough that the value is
  /// accurate to rounding.
  bool settled() const { return converged || (stalled && grad_norm <= Scalar(1e-7)); }
};

struct DescentOptions {
  double grad_tol = 1e-10;
  double armijo = 1e-4;
  std::size_t max_iters = 1000000;
};

/// Absolute constant of the weak pseudorandom rate bound.
constexpr double kPseudorandomKappa = 1.0 / 8192000.0;

// ---------------------------------------------------------------------------
// generic descent

namespace detail {

/// Gradient descent with Armijo backtracking (halving). `fg(y, g)` returns the
/// objective (+inf outside the domain) and writes the gradient. Divergence is
/// declared when the objective drops below `floor`.
template <typename Scalar, typename F>
DescentResult<Scalar> descend(F&& fg, VectorX<Scalar> y, const DescentOptions& opts, Scalar floor) {
  DescentResult<Scalar> r;
  VectorX<Scalar> g(y.size()), g_try(y.size());
  Scalar f = fg(y, g);
  if (!std::isfinite(f)) {
    r.diverged = true;
    r.minimizer = y;
    return r;
  }
  Scalar step = 1;
  while (r.iterations < opts.max_iters) {
    if (g.template lpNorm<Eigen::Infinity>() <= Scalar(opts.grad_tol)) {
      r.converged = true;
      break;
    }
    if (f < floor) {
      r.diverged = true;
      break;
    }
    ++r.iterations;
    const Scalar g2 = g.squaredNorm();
    bool accepted = false;
    step *= 2;
    while (step > Scalar(1e-300)) {
      VectorX<Scalar> y_try = y - step * g;
      const Scalar f_try = fg(y_try, g_try);
      // strict: an unchanged value means the decrease is below rounding
      if (std::isfinite(f_try) && f_try < f && f_try <= f - Scalar(opts.armijo) * step * g2) {
        y = std::move(y_try);
        f = f_try;
        g.swap(g_try);
        accepted = true;
        break;
      }
      step /= 2;
    }
    if (!accepted) {  // no decrease representable
      r.stalled = true;
      break;
    }
  }
  r.grad_norm = g.template lpNorm<Eigen::Infinity>();
  r.log_value = f;
  r.value = r.diverged ? Scalar(0) : std::exp(f);
  r.minimizer = std::move(y);
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// zero capacity

/// Maximum matching on the support by augmenting paths; returns a Hall
/// violation when the support has no perfect matching.
template <typename Scalar>
std::optional<HallCertificate> capacity_zero_check(const NonNegMatrix<Scalar>& a) {
  const Index n = a.m();
  if (a.n() != n) throw std::invalid_argument("capacity_zero_check: input must be square");
  const auto& e = a.entries();
  std::vector<Index> match_col(std::size_t(n), -1), match_row(std::size_t(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n));

  auto augment = [&](auto&& self, Index i) -> bool {
    for (Index j = 0; j < n; ++j) {
      if (!(e(i, j) > Scalar(0)) || seen[std::size_t(j)]) continue;
      seen[std::size_t(j)] = 1;
      if (match_col[std::size_t(j)] < 0 || self(self, match_col[std::size_t(j)])) {
        match_col[std::size_t(j)] = i;
        match_row[std::size_t(i)] = j;
        return true;
      }
    }
    return false;
  };

  Index matched = 0;
  for (Index i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    if (augment(augment, i)) ++matched;
  }
  if (matched == n) return std::nullopt;

  // Alternating reachability from unmatched rows.
  std::vector<char> row_in(std::size_t(n), 0), col_in(std::size_t(n), 0);
  std::vector<Index> stack;
  for (Index i = 0; i < n; ++i)
    if (match_row[std::size_t(i)] < 0) {
      row_in[std::size_t(i)] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j = 0; j < n; ++j) {
      if (!(e(i, j) > Scalar(0)) || col_in[std::size_t(j)]) continue;
      col_in[std::size_t(j)] = 1;
      const Index i2 = match_col[std::size_t(j)];
      if (i2 >= 0 && !row_in[std::size_t(i2)]) {
        row_in[std::size_t(i2)] = 1;
        stack.push_back(i2);
      }
    }
  }
  HallCertificate cert;
  cert.side = n;
  for (Index i = 0; i < n; ++i)
    if (row_in[std::size_t(i)]) cert.rows.push_back(i);
  for (Index j = 0; j < n; ++j)
    if (!col_in[std::size_t(j)]) cert.cols.push_back(j);
  return cert;
}

/// True when the certificate is a valid Hall violation for the support of a.
template <typename Scalar>
bool verify_certificate(const NonNegMatrix<Scalar>& a, const HallCertificate& c) {
  if (a.m() != c.side || a.n() != c.side) return false;
  if (Index(c.rows.size() + c.cols.size()) <= c.side) return false;
  for (Index i : c.rows)
    for (Index j : c.cols)
      if (a(i, j) > Scalar(0)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// tensor reduction

/// A (x) (g^2/(mn)) J with J of shape (n/g) x (m/g), g = gcd(m, n). The result
/// is square of side mn/g and has the same size, Delta and capacity as A.
template <typename Scalar>
NonNegMatrix<Scalar> tensor_square(const NonNegMatrix<Scalar>& a) {
  const Index m = a.m(), n = a.n();
  const Index g = std::gcd(m, n);
  const Index p = n / g, q = m / g;
  const Scalar c = Scalar(g) * Scalar(g) / (Scalar(m) * Scalar(n));
  MatrixX<Scalar> b(m * p, n * q);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) b.block(i * p, j * q, p, q).setConstant(c * a(i, j));
  return NonNegMatrix<Scalar>(std::move(b));
}

/// Hall check on A itself when square, otherwise on its tensor square.
template <typename Scalar>
std::optional<HallCertificate> zero_capacity_certificate(const NonNegMatrix<Scalar>& a) {
  if (a.m() == a.n()) return capacity_zero_check(a);
  return capacity_zero_check(tensor_square(a));
}

// ---------------------------------------------------------------------------
// bounds

/// s - (mn/g) sqrt(Delta/2) with g = gcd(m, n), clamped at 0.
template <typename Scalar>
Scalar balance_lower_bound(Scalar s, Scalar delta, Index m, Index n) {
  const Scalar side = Scalar(m) * Scalar(n) / Scalar(std::gcd(m, n));
  return std::max(Scalar(0), s - side * std::sqrt(delta / Scalar(2)));
}

/// Largest alpha for which B is (alpha, beta)-pseudorandom.
template <typename Scalar>
Scalar pseudorandom_alpha(const NonNegMatrix<Scalar>& b, Scalar beta) {
  const auto& e = b.entries();
  const Index m = e.rows(), n = e.cols();
  const Index need = Index(std::ceil((Scalar(1) - beta) * Scalar(n) - Scalar(1e-12)));
  Scalar alpha = e.colwise().maxCoeff().minCoeff();
  if (need < 1) return alpha;
  for (Index i = 0; i < m; ++i) {
    std::vector<Scalar> row(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) row[std::size_t(j)] = e(i, j);
    std::nth_element(row.begin(), row.begin() + (need - 1), row.end(), std::greater<Scalar>());
    alpha = std::min(alpha, row[std::size_t(need - 1)]);
  }
  return alpha;
}

/// Lower bound s - Delta/(5 kappa alpha n) when its hypotheses hold for A:
/// (alpha, 1e-9)-pseudorandom, equal column sums, alpha >= 80 sqrt(m Delta)/(kappa n),
/// s = m and Delta <= 1/10.
template <typename Scalar>
std::optional<Scalar> pseudorandom_lower_bound(const NonNegMatrix<Scalar>& a, Scalar tol = 1e-12) {
  const Scalar s = size_of(a), delta = delta_of(a);
  const Index m = a.m(), n = a.n();
  const Scalar kappa = Scalar(kPseudorandomKappa);
  if (std::abs(s - Scalar(m)) > tol * Scalar(m) || delta > Scalar(0.1)) return std::nullopt;
  const VectorX<Scalar> c = a.col_sums();
  if ((c.array() - s / Scalar(n)).abs().maxCoeff() > tol * s) return std::nullopt;
  const Scalar alpha = pseudorandom_alpha(a, Scalar(1e-9));
  if (!(alpha > Scalar(0))) return std::nullopt;
  if (alpha < Scalar(80) * std::sqrt(Scalar(m) * delta) / (kappa * Scalar(n))) return std::nullopt;
  return s - delta / (Scalar(5) * kappa * alpha * Scalar(n));
}

template <typename Scalar>
CapacityBounds<Scalar> capacity_bounds(const NonNegMatrix<Scalar>& a) {
  const Scalar s = size_of(a), delta = delta_of(a);
  CapacityBounds<Scalar> b;
  b.lower = balance_lower_bound(s, delta, a.m(), a.n());
  if (auto pr = pseudorandom_lower_bound(a)) b.lower = std::max(b.lower, *pr);
  // The all-ones test vector gives m (prod r_i)^{1/m}.
  const VectorX<Scalar> r = a.row_sums();
  const Scalar geo = (r.array() > Scalar(0)).all()
                         ? Scalar(a.m()) * std::exp(r.array().log().mean())
                         : Scalar(0);
  b.upper = std::min(s, geo);
  b.lower = std::min(b.lower, b.upper);
  return b;
}

template <typename Scalar>
CapacityBounds<Scalar> capacity_bounds(const OperatorTuple<Scalar>& u) {
  const MatrixX<Scalar> bm = left_gram(u);
  const Scalar s = bm.trace();
  const Scalar delta = delta_from_grams(bm, right_gram(u), s);
  CapacityBounds<Scalar> b;
  b.lower = balance_lower_bound(s, delta, u.m(), u.n());
  // X = I gives m det(sum U U^T)^{1/m}.
  const VectorX<Scalar> ev = symmetric_eigenvalues(bm);
  const Scalar geo = (ev.array() > Scalar(0)).all()
                         ? Scalar(u.m()) * std::exp(ev.array().log().mean())
                         : Scalar(0);
  b.upper = std::min(s, geo);
  b.lower = std::min(b.lower, b.upper);
  return b;
}

template <typename Scalar>
CapacityBounds<Scalar> capacity_bounds(const Frame<Scalar>& f) {
  const Scalar s = size_of(f), delta = delta_of(f);
  CapacityBounds<Scalar> b;
  b.lower = balance_lower_bound(s, delta, f.d(), f.n());
  const VectorX<Scalar> ev = symmetric_eigenvalues(frame_operator(f));
  const Scalar geo = (ev.array() > Scalar(0)).all()
                         ? Scalar(f.d()) * std::exp(ev.array().log().mean())
                         : Scalar(0);
  b.upper = std::min(s, geo);
  b.lower = std::min(b.lower, b.upper);
  return b;
}

// ---------------------------------------------------------------------------
// matrix capacity

/// Zero check, then Sinkhorn to Delta <= tol s^2 and
/// cap = s(B) (prod X)^{-1/m} (prod Y)^{-1/n}.
template <typename Scalar>
CapacityResult<Scalar> matrix_capacity(const NonNegMatrix<Scalar>& a, Scalar tol = 1e-12,
                                       std::size_t max_iters = kDefaultMaxIters) {
  CapacityResult<Scalar> r;
  const auto bounds = capacity_bounds(a);
  r.lower = bounds.lower;
  r.upper = bounds.upper;
  if (auto cert = zero_capacity_certificate(a)) {
    r.value = 0;
    r.method = CapacityMethod::zero_detected;
    r.certificate = std::move(*cert);
    r.lower = 0;
    return r;
  }
  const Scalar s = size_of(a);
  const auto sk = sinkhorn(a, tol * s * s, max_iters);
  r.iterations = sk.report.iterations;
  r.converged = sk.report.converged;
  r.method = CapacityMethod::scaling_based;
  const Scalar log_scale = sk.log_x.sum() / Scalar(a.m()) + sk.log_y.sum() / Scalar(a.n());
  r.value = size_of(sk.scaled) * std::exp(-log_scale);
  return r;
}

/// Minimizes f(y) = log m + (1/m) sum_i log((A e^y)_i) - (1/n) sum_j y_j from y = 0.
template <typename Scalar>
DescentResult<Scalar> matrix_capacity_convex(const NonNegMatrix<Scalar>& a, Scalar tol = 1e-10,
                                             DescentOptions opts = {}) {
  opts.grad_tol = double(tol);
  const auto& e = a.entries();
  const Index m = a.m(), n = a.n();
  auto fg = [&](const VectorX<Scalar>& y, VectorX<Scalar>& g) -> Scalar {
    const Scalar ymax = y.maxCoeff();
    const VectorX<Scalar> w = (y.array() - ymax).exp();
    const VectorX<Scalar> ax = e * w;
    if ((ax.array() <= Scalar(0)).any()) return std::numeric_limits<Scalar>::infinity();
    const Scalar f = std::log(Scalar(m)) + ymax + ax.array().log().mean() - y.mean();
    g = (w.array() * (e.transpose() * ax.cwiseInverse()).array()).matrix() / Scalar(m);
    g.array() -= Scalar(1) / Scalar(n);
    return f;
  };
  const Scalar s = size_of(a);
  return detail::descend<Scalar>(fg, VectorX<Scalar>::Zero(n), opts,
                                 s > Scalar(0) ? std::log(s) - Scalar(60) : Scalar(-60));
}

// ---------------------------------------------------------------------------
// frame and operator capacity

/// Minimizes log m + (1/m) log det(sum_j e^{y_j} P_j) - (1/n) sum_j y_j over y,
/// where P_j = sum_l U_l e_j e_j^T U_l^T. For a frame P_j = u_j u_j^T.
template <typename Scalar>
DescentResult<Scalar> diagonal_capacity_descent(const std::vector<MatrixX<Scalar>>& factors,
                                                Index m, Scalar tol = 1e-10,
                                                DescentOptions opts = {}) {
  // factors[j] is m x r_j with P_j = factors[j] factors[j]^T.
  opts.grad_tol = double(tol);
  const Index n = Index(factors.size());
  auto fg = [&](const VectorX<Scalar>& y, VectorX<Scalar>& g) -> Scalar {
    const Scalar ymax = y.maxCoeff();
    MatrixX<Scalar> mat = MatrixX<Scalar>::Zero(m, m);
    for (Index j = 0; j < n; ++j)
      mat.noalias() += std::exp(y(j) - ymax) * factors[std::size_t(j)] * factors[std::size_t(j)].transpose();
    Eigen::LLT<MatrixX<Scalar>> llt(mat);
    if (llt.info() != Eigen::Success) return std::numeric_limits<Scalar>::infinity();
    const Scalar logdet = Scalar(2) * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    if (!std::isfinite(logdet)) return std::numeric_limits<Scalar>::infinity();
    for (Index j = 0; j < n; ++j) {
      const MatrixX<Scalar> sol = llt.solve(factors[std::size_t(j)]);
      g(j) = std::exp(y(j) - ymax) * (factors[std::size_t(j)].array() * sol.array()).sum() / Scalar(m) -
             Scalar(1) / Scalar(n);
    }
    return std::log(Scalar(m)) + ymax + logdet / Scalar(m) - y.mean();
  };
  Scalar s = 0;
  for (const auto& f : factors) s += f.squaredNorm();
  return detail::descend<Scalar>(fg, VectorX<Scalar>::Zero(n), opts,
                                 s > Scalar(0) ? std::log(s) - Scalar(60) : Scalar(-60));
}

template <typename Scalar>
DescentResult<Scalar> frame_capacity_descent(const Frame<Scalar>& f, Scalar tol = 1e-10) {
  std::vector<MatrixX<Scalar>> factors;
  for (Index j = 0; j < f.n(); ++j) factors.push_back(f.vector(j));
  return diagonal_capacity_descent(factors, f.d(), tol);
}

/// Capacity of a frame over diagonal scalings: exp of the minimum of
/// g(y) = log d + (1/d) log det(sum e^{y_l} u_l u_l^T) - (1/n) sum y_l.
template <typename Scalar>
CapacityResult<Scalar> frame_capacity(const Frame<Scalar>& f, Scalar tol = 1e-10) {
  CapacityResult<Scalar> r;
  const auto bounds = capacity_bounds(f);
  r.lower = bounds.lower;
  r.upper = bounds.upper;
  const VectorX<Scalar> ev = symmetric_eigenvalues(frame_operator(f));
  if (!(ev.minCoeff() > Scalar(1e-13) * std::max(ev.maxCoeff(), Scalar(0)))) {
    r.value = 0;
    r.lower = 0;
    r.method = CapacityMethod::zero_detected;
    return r;
  }
  const auto dr = frame_capacity_descent(f, tol);
  r.iterations = dr.iterations;
  r.converged = dr.settled();
  r.value = dr.diverged ? Scalar(0) : std::min(dr.value, r.upper);
  r.method = dr.diverged ? CapacityMethod::zero_detected : CapacityMethod::convex_descent;
  if (dr.diverged) r.lower = 0;
  return r;
}

/// Operator Sinkhorn to a doubly balanced V = L U R, then
/// cap = s(V) det(L)^{-2/m} det(R)^{-2/n}. Singular Gram matrices certify 0.
template <typename Scalar>
CapacityResult<Scalar> operator_capacity(const OperatorTuple<Scalar>& u, Scalar tol = 1e-12,
                                         std::size_t max_iters = kDefaultMaxIters) {
  CapacityResult<Scalar> r;
  const auto bounds = capacity_bounds(u);
  r.lower = bounds.lower;
  r.upper = bounds.upper;
  const Index m = u.m(), n = u.n();
  try {
    const auto os = operator_sinkhorn(u, tol * Scalar(m) * Scalar(m), max_iters);
    r.iterations = os.report.iterations;
    r.converged = os.report.converged;
    const Scalar log_scale = Scalar(2) * os.scaling.left_logdet / Scalar(m) +
                             Scalar(2) * os.scaling.right_logdet / Scalar(n);
    const Scalar est = size_of(os.scaled) * std::exp(-log_scale);
    r.value = std::min(est, r.upper);
    r.method = os.report.converged ? CapacityMethod::scaling_based : CapacityMethod::bracket_only;
  } catch (const DegenerateInput&) {
    r.value = 0;
    r.lower = 0;
    r.method = CapacityMethod::zero_detected;
  }
  return r;
}

// ---------------------------------------------------------------------------
// operator to matrix

/// A_ij = sum_l (g_i^T U_l f_j)^2 with f_j the eigenvectors of X and g_i those
/// of sum_l U_l X U_l^T.
template <typename Scalar>
NonNegMatrix<Scalar> reduce_operator_to_matrix(const OperatorTuple<Scalar>& u, const MatrixX<Scalar>& x) {
  const Index m = u.m(), n = u.n();
  if (x.rows() != n || x.cols() != n) throw std::invalid_argument("reduce_operator_to_matrix: X shape");
  if ((x - x.transpose()).norm() > Scalar(1e-10) * std::max(Scalar(1), x.norm()))
    throw std::invalid_argument("reduce_operator_to_matrix: X not symmetric");
  const auto ex = jacobi_eigen(x, Scalar(0));
  if (!(ex.values.minCoeff() > Scalar(0)))
    throw std::invalid_argument("reduce_operator_to_matrix: X not positive definite");
  MatrixX<Scalar> t = MatrixX<Scalar>::Zero(m, m);
  for (const auto& ul : u.mats()) t.noalias() += ul * x * ul.transpose();
  const auto et = jacobi_eigen(t, Scalar(0));
  MatrixX<Scalar> a = MatrixX<Scalar>::Zero(m, n);
  for (const auto& ul : u.mats())
    a += (et.vectors.transpose() * ul * ex.vectors).array().square().matrix();
  return NonNegMatrix<Scalar>(std::move(a));
}

/// Weight from the diagonal relaxation minimizer, or I when that descent fails.
template <typename Scalar>
MatrixX<Scalar> default_reduction_weight(const OperatorTuple<Scalar>& u) {
  const Index n = u.n();
  std::vector<MatrixX<Scalar>> factors;
  for (Index j = 0; j < n; ++j) {
    MatrixX<Scalar> fj(u.m(), u.k());
    for (Index l = 0; l < u.k(); ++l) fj.col(l) = u[l].col(j);
    factors.push_back(std::move(fj));
  }
  const auto dr = diagonal_capacity_descent(factors, u.m());
  if (!dr.settled() || dr.diverged) return MatrixX<Scalar>::Identity(n, n);
  const VectorX<Scalar> y = dr.minimizer.array() - dr.minimizer.mean();
  return y.array().exp().matrix().asDiagonal();
}

template <typename Scalar>
NonNegMatrix<Scalar> reduce_operator_to_matrix(const OperatorTuple<Scalar>& u) {
  return reduce_operator_to_matrix(u, default_reduction_weight(u));
}

/// m det(sum U X U^T)^{1/m} / det(X)^{1/n}: the capacity objective at X.
template <typename Scalar>
Scalar operator_capacity_objective(const OperatorTuple<Scalar>& u, const MatrixX<Scalar>& x) {
  MatrixX<Scalar> t = MatrixX<Scalar>::Zero(u.m(), u.m());
  for (const auto& ul : u.mats()) t.noalias() += ul * x * ul.transpose();
  const VectorX<Scalar> et = symmetric_eigenvalues(t), ex = symmetric_eigenvalues(x);
  if (!(et.minCoeff() > Scalar(0))) return Scalar(0);
  return Scalar(u.m()) * std::exp(et.array().log().mean() - ex.array().log().mean());
}

// ---------------------------------------------------------------------------
// tight example

template <typename Scalar>
struct TightExample {
  int k = 1;
  NonNegMatrix<Scalar> A;
  Scalar x = 0, y = 0, E = 0, F = 0;
};

/// (2k-1) x (2k+1) matrix [0_{k x k}, x J_{k x (k+1)}; y J_{(k-1) x k}, 0] with
/// size 1, zero capacity and Delta = 1/(8k^4 - 6k^2).
template <typename Scalar = double>
TightExample<Scalar> tight_example(int k) {
  if (k < 1) throw std::invalid_argument("tight_example: k must be at least 1");
  const Scalar kk = Scalar(k);
  TightExample<Scalar> t;
  t.k = k;
  const Scalar a = (Scalar(4) * kk * kk + Scalar(2) * kk - Scalar(1)) / (kk * (kk + Scalar(1)));
  if (k == 1) {
    t.E = Scalar(1);
    t.F = Scalar(0);
    t.y = Scalar(0);
  } else {
    const Scalar b = (Scalar(4) * kk * kk - Scalar(2) * kk - Scalar(1)) / ((kk - Scalar(1)) * kk);
    const Scalar opt = Scalar(1) / (Scalar(1) / a + Scalar(1) / b);
    t.E = opt / a;
    t.F = opt / b;
    t.y = t.F / ((kk - Scalar(1)) * kk);
  }
  t.x = t.E / (kk * (kk + Scalar(1)));
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(2 * k - 1, 2 * k + 1);
  m.block(0, k, k, k + 1).setConstant(t.x);
  if (k > 1) m.block(k, 0, k - 1, k).setConstant(t.y);
  t.A = NonNegMatrix<Scalar>(std::move(m));
  return t;
}

}  // namespace frameflow

#endif  // FRAMEFLOW_CAPACITY_HPP_
