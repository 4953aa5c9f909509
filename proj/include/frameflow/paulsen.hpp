#ifndef FRAMEFLOW_PAULSEN_HPP_
#define FRAMEFLOW_PAULSEN_HPP_

#include "frameflow/capacity.hpp"
#include "frameflow/dynamics.hpp"
#include "frameflow/pseudorandom.hpp"
#include "frameflow/random.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace frameflow {

// ---------------------------------------------------------------------------
// exact frames

/// Real harmonic equal-norm Parseval frame of n vectors in R^d (d <= n):
/// rows sqrt(2/n) cos(2 pi k j / n), sqrt(2/n) sin(2 pi k j / n), plus a
/// constant row 1/sqrt(n) when d is odd.
template <typename Scalar = double>
Frame<Scalar> harmonic_frame(Index d, Index n) {
  if (d < 1 || n < d) throw std::invalid_argument("harmonic_frame: need 1 <= d <= n");
  if (d == n) return Frame<Scalar>(MatrixX<Scalar>::Identity(d, n));
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  MatrixX<Scalar> v(d, n);
  Index row = 0;
  if (d % 2 == 1) v.row(row++).setConstant(Scalar(1) / std::sqrt(Scalar(n)));
  for (Index k = 1; row < d; ++k) {
    for (Index j = 0; j < n; ++j) {
      const Scalar a = Scalar(2) * pi * Scalar(k) * Scalar(j) / Scalar(n);
      v(row, j) = std::sqrt(Scalar(2) / Scalar(n)) * std::cos(a);
      v(row + 1, j) = std::sqrt(Scalar(2) / Scalar(n)) * std::sin(a);
    }
    row += 2;
  }
  return Frame<Scalar>(std::move(v));
}

/// Rescales each vector to squared norm d/n.
template <typename Scalar>
Frame<Scalar> equalize_norms(const Frame<Scalar>& f) {
  MatrixX<Scalar> v = f.vectors();
  frame_equal_norm_step(v);
  return Frame<Scalar>(std::move(v));
}

template <typename Scalar>
bool is_degenerate_frame(const Frame<Scalar>& f) {
  if ((f.vectors().colwise().squaredNorm().array() <= Scalar(0)).any()) return true;
  const VectorX<Scalar> ev = symmetric_eigenvalues(frame_operator(f));
  return !(ev.minCoeff() > Scalar(1e-13) * ev.maxCoeff());
}

// ---------------------------------------------------------------------------
// basic pipeline

template <typename Scalar>
struct BasicDiagnostics {
  bool fallback = false;  // degenerate input: an arbitrary exact frame was returned
  Scalar eps_in = 0;
  Scalar delta_in = 0;
  Scalar delta_preprocessed = 0;
  Scalar delta_flowed = 0;
  Scalar delta_out = 0;
  Scalar s_flowed = 0;  // size at the end of the flow, approximately the capacity
  Scalar flow_time = 0;
  Scalar movement = 0;
  Scalar dist = 0;
  FlowStatus status = FlowStatus::converged;
  std::size_t steps = 0;
};

template <typename Scalar>
struct BasicResult {
  Frame<Scalar> frame;
  BasicDiagnostics<Scalar> diag;
};

/// Rescale to size d, flow until Delta <= final_delta, rescale to size d again.
template <typename Scalar>
BasicResult<Scalar> solve_basic(const Frame<Scalar>& u, Scalar final_delta,
                                Scalar t_max = Scalar(1e6), const FlowOptions& opts = {}) {
  BasicResult<Scalar> r;
  const Scalar d = Scalar(u.d());
  r.diag.eps_in = eps_nearness(u);
  r.diag.delta_in = delta_of(u);
  if (u.d() > u.n()) throw DegenerateInput("solve_basic: n < d admits no Parseval frame");
  if (is_degenerate_frame(u)) {
    r.frame = harmonic_frame<Scalar>(u.d(), u.n());
    r.diag.fallback = true;
  } else {
    const Frame<Scalar> u0 = rescale_to_size(u, d);
    r.diag.delta_preprocessed = delta_of(u0);
    // Rescaling from s(T) back to d multiplies Delta by (d/s(T))^2, so when
    // the size dropped the flow continues with the target tightened by that factor.
    Frame<Scalar> cur = u0;
    Scalar target = final_delta;
    for (int round = 0; round < 8; ++round) {
      auto flowed = frame_flow(cur, target, t_max - r.diag.flow_time, opts);
      r.diag.delta_flowed = flowed.traj.back().delta;
      r.diag.s_flowed = flowed.traj.back().s;
      r.diag.flow_time += flowed.traj.back().t;
      r.diag.movement += flowed.traj.back().movement;
      r.diag.status = flowed.traj.status;
      r.diag.steps += flowed.traj.accepted_steps;
      cur = std::move(flowed.final_state);
      if (r.diag.status != FlowStatus::converged || !(r.diag.s_flowed > Scalar(0))) break;
      const Scalar grow = (d / r.diag.s_flowed) * (d / r.diag.s_flowed);
      if (r.diag.delta_flowed * grow <= final_delta) break;
      target = final_delta / (Scalar(2) * grow);
    }
    if (!(r.diag.s_flowed > Scalar(0))) {
      r.frame = harmonic_frame<Scalar>(u.d(), u.n());
      r.diag.fallback = true;
    } else {
      r.frame = rescale_to_size(cur, d);
    }
  }
  r.diag.delta_out = delta_of(r.frame);
  r.diag.dist = dist(u, r.frame);
  return r;
}

/// D = (R R^T)^{1/2}. When R comes from a doubly stochastic scaling of a frame
/// embedding, R R^T is positive diagonal and so is D.
template <typename Scalar>
VectorX<Scalar> diagonalize_right_scaling(const MatrixX<Scalar>& r, Scalar diag_tol = 1e-8) {
  const MatrixX<Scalar> rr = r * r.transpose();
  const auto eig = jacobi_eigen(rr);
  if (!(eig.values.minCoeff() > Scalar(1e-13) * eig.values.maxCoeff()))
    throw DegenerateInput("diagonalize_right_scaling: R R^T singular");
  const MatrixX<Scalar> dm = sqrt_psd(rr);
  const MatrixX<Scalar> off = dm - MatrixX<Scalar>(dm.diagonal().asDiagonal());
  if (off.norm() > diag_tol * dm.norm())
    throw std::invalid_argument("diagonalize_right_scaling: R R^T is not diagonal");
  return dm.diagonal();
}

// ---------------------------------------------------------------------------
// perturbation

template <typename Scalar>
struct PerturbationNoise {
  Scalar sigma2 = 0;
  MatrixX<Scalar> x;  // raw Gaussian, column j is x_j
  MatrixX<Scalar> y;  // projected onto L1: <u_j, y_j> = 0
  MatrixX<Scalar> z;  // projected onto L1 and L2: additionally sum u_j z_j^T = 0
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  Index constraint_rank = 0;  // directions kept from the L2 family
};

template <typename Scalar>
struct PerturbResult {
  Frame<Scalar> frame;
  PerturbationNoise<Scalar> noise;
};

namespace detail {

/// Per-vector projection onto L1 for vectors of squared norm d/n.
template <typename Scalar>
void project_l1(const MatrixX<Scalar>& u, MatrixX<Scalar>& y) {
  const Scalar c = Scalar(u.cols()) / Scalar(u.rows());
  for (Index j = 0; j < u.cols(); ++j) y.col(j) -= c * u.col(j).dot(y.col(j)) * u.col(j);
}

}  // namespace detail

/// Gaussian noise x, projected to y in L1 = {<u_j, y_j> = 0} and to z in
/// L1 and L2 = {sum u_j z_j^T = 0}; then v = u + z and w_j = sqrt(d/n) v_j / |v_j|.
template <typename Scalar>
PerturbResult<Scalar> perturb(const Frame<Scalar>& f, Scalar sigma2, std::uint64_t seed,
                              std::uint64_t stream = 0) {
  if (sigma2 < Scalar(0)) throw std::invalid_argument("perturb: sigma2 must be nonnegative");
  const Index d = f.d(), n = f.n();
  const Scalar target = Scalar(d) / Scalar(n);
  const MatrixX<Scalar>& u = f.vectors();
  const VectorX<Scalar> norms = u.colwise().squaredNorm().transpose();
  if ((norms.array() - target).abs().maxCoeff() > Scalar(1e-10) * target)
    throw std::invalid_argument("perturb: vectors must have squared norm d/n");

  PerturbResult<Scalar> r;
  auto& nz = r.noise;
  nz.sigma2 = sigma2;
  nz.seed = seed;
  nz.stream = stream;
  CounterRng rng(seed, stream);
  nz.x = gaussian_matrix<Scalar>(d, n, rng, std::sqrt(sigma2));
  nz.y = nz.x;
  detail::project_l1(u, nz.y);

  // Functionals of L2 restricted to L1, orthonormalized by modified Gram-Schmidt.
  std::vector<MatrixX<Scalar>> basis;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      MatrixX<Scalar> phi = MatrixX<Scalar>::Zero(d, n);
      phi.row(b) = u.row(a);
      detail::project_l1(u, phi);
      const Scalar norm0 = phi.norm();
      if (!(norm0 > Scalar(0))) continue;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) phi -= (q.array() * phi.array()).sum() * q;
      const Scalar norm1 = phi.norm();
      if (norm1 < Scalar(1e-12) * norm0) continue;
      basis.push_back(phi / norm1);
    }
  nz.constraint_rank = Index(basis.size());

  nz.z = nz.y;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) nz.z -= (q.array() * nz.z.array()).sum() * q;
  detail::project_l1(u, nz.z);

  MatrixX<Scalar> v = u + nz.z;
  frame_equal_norm_step(v);
  r.frame = Frame<Scalar>(std::move(v));
  return r;
}

/// Residuals of the noise constraints, each scaled as in the invariants.
template <typename Scalar>
struct NoiseResiduals {
  Scalar l1_y = 0;  // max_j |<u_j, y_j>| / (|u_j| |y_j|)
  Scalar l1_z = 0;  // max_j |<u_j, z_j>| / (|u_j| |z_j|)
  Scalar l2 = 0;    // |sum u_j z_j^T|_F / sum |u_j| |z_j|
};

template <typename Scalar>
NoiseResiduals<Scalar> noise_residuals(const Frame<Scalar>& f, const PerturbationNoise<Scalar>& nz) {
  NoiseResiduals<Scalar> r;
  const auto& u = f.vectors();
  Scalar denom = 0;
  for (Index j = 0; j < u.cols(); ++j) {
    const Scalar nu = u.col(j).norm(), ny = nz.y.col(j).norm(), nzz = nz.z.col(j).norm();
    if (ny > 0) r.l1_y = std::max(r.l1_y, std::abs(u.col(j).dot(nz.y.col(j))) / (nu * ny));
    if (nzz > 0) r.l1_z = std::max(r.l1_z, std::abs(u.col(j).dot(nz.z.col(j))) / (nu * nzz));
    denom += nu * nzz;
  }
  if (denom > 0) r.l2 = (u * nz.z.transpose()).norm() / denom;
  return r;
}

// ---------------------------------------------------------------------------
// frame to matrix

/// B_ij = <g_i, w_j>^2 for the columns g_i of an orthonormal basis.
template <typename Scalar>
NonNegMatrix<Scalar> frame_to_matrix(const Frame<Scalar>& w,
                                     const std::optional<MatrixX<Scalar>>& basis = std::nullopt) {
  const Index d = w.d();
  if (!basis) return hadamard_square(w.vectors());
  const MatrixX<Scalar>& g = *basis;
  if (g.rows() != d || g.cols() != d) throw std::invalid_argument("frame_to_matrix: basis shape");
  if ((g.transpose() * g - MatrixX<Scalar>::Identity(d, d)).cwiseAbs().maxCoeff() > Scalar(1e-10))
    throw std::invalid_argument("frame_to_matrix: basis not orthonormal");
  return hadamard_square(MatrixX<Scalar>(g.transpose() * w.vectors()));
}

/// Eigenbasis of sum_l x_l w_l w_l^T at the diagonal capacity minimizer x.
template <typename Scalar>
MatrixX<Scalar> capacity_basis(const Frame<Scalar>& w, Scalar tol = 1e-10) {
  const auto dr = frame_capacity_descent(w, tol);
  const VectorX<Scalar> x = (dr.minimizer.array() - dr.minimizer.maxCoeff()).exp();
  const MatrixX<Scalar> m = w.vectors() * x.asDiagonal() * w.vectors().transpose();
  return jacobi_eigen(m, Scalar(0)).vectors;
}

// ---------------------------------------------------------------------------
// capacity from a convergence rate

/// s(0) - 2 Delta(0) / mu, valid when -dDelta/dt >= mu Delta along the flow.
template <typename Scalar>
Scalar capacity_from_rate(const Trajectory<Scalar>& traj, Scalar mu) {
  if (!(mu > Scalar(0))) throw std::invalid_argument("capacity_from_rate: mu must be positive");
  for (const auto& smp : traj.samples)
    if (-smp.ddelta_dt < mu * smp.delta * (Scalar(1) - Scalar(1e-12)))
      throw InvariantViolation("capacity_from_rate: rate bound fails at t = " + std::to_string(double(smp.t)));
  return traj.front().s - Scalar(2) * traj.front().delta / mu;
}

// ---------------------------------------------------------------------------
// smoothed pipeline

struct SmoothedParams {
  double zeta = 0.1;
  double kappa = 1e-3;
  double final_delta = 1e-10;
  bool demo_mode = true;
  std::size_t max_iterations = 60;
  std::size_t max_retries = 20;
  std::uint64_t seed = 0;
  FlowOptions flow;
};

struct PathRecord {
  std::size_t l = 0;
  double sigma2 = 0;          // used
  double sigma2_formula = 0;  // 1e4 sqrt(d Delta(U^l)) / (zeta kappa n) before the cap
  double target = 0;          // Delta / (3 2^l)
  double delta_before = 0;    // Delta(U^l)
  double delta_perturbed = 0; // Delta(W^l)
  double delta_flowed = 0;    // Delta(W^(T))
  double delta_after = 0;     // Delta(U^{l+1})
  double flow_time = 0;       // T_l
  double rescale_factor = 0;  // sqrt(d / s(W^(T)))
  double perturb_dist = 0;    // dist(U^l, W^l)
  double movement = 0;        // dist(U^l, U^{l+1})
  double capacity_lower = 0;  // balance lower bound on cap(W^l)
  double s_after = 0;
  std::size_t retries = 0;
  bool halving_ok = false;    // Delta(U^{l+1}) <= Delta / 2^{l+1}
};

struct PathTrace {
  double zeta = 0;
  double kappa = 0;
  double delta0 = 0;
  std::uint64_t seed = 0;
  bool demo_mode = false;
  bool assumptions_hold = false;
  bool downgraded = false;  // preprocessing precondition failed; solve_basic used
  bool converged = false;
  std::vector<std::string> warnings;
  std::vector<PathRecord> iterations;
};

template <typename Scalar>
struct SmoothedResult {
  Frame<Scalar> frame;
  PathTrace trace;
};

/// Repeats perturb, flow to Delta / (3 2^l), rescale to size d, until
/// Delta <= final_delta or the iteration cap is reached.
template <typename Scalar>
SmoothedResult<Scalar> solve_smoothed(const Frame<Scalar>& u, const SmoothedParams& params) {
  SmoothedResult<Scalar> out;
  PathTrace& tr = out.trace;
  const Index d = u.d(), n = u.n();
  const double dd = double(d), nn = double(n);
  tr.demo_mode = params.demo_mode;
  tr.zeta = params.demo_mode ? 0.1 : params.zeta;
  tr.kappa = params.demo_mode ? 1e-3 : params.kappa;
  tr.seed = params.seed;
  if (is_degenerate_frame(u)) throw DegenerateInput("solve_smoothed: degenerate input");

  Frame<Scalar> cur = rescale_to_size(u, Scalar(d));
  const double delta = double(delta_of(cur));
  tr.delta0 = delta;

  const double zk = tr.zeta * tr.kappa;
  tr.assumptions_hold = nn >= 1e15 * std::pow(dd, 4) / (zk * zk) &&
                        delta <= std::pow(zk, 6) / (1e55 * std::pow(dd, 9));
  if (!tr.assumptions_hold)
    tr.warnings.push_back("global assumptions n >= 1e15 d^4/(zeta^2 kappa^2) and "
                          "Delta <= zeta^6 kappa^6/(1e55 d^9) do not hold; only per-step "
                          "invariants are checked");

  if (delta > dd / 16) {
    tr.downgraded = true;
    tr.warnings.push_back("Delta > d/16: norm equalization precondition fails, using solve_basic");
    auto basic = solve_basic(u, Scalar(params.final_delta), Scalar(1e6), params.flow);
    out.frame = std::move(basic.frame);
    tr.converged = double(delta_of(out.frame)) <= params.final_delta;
    return out;
  }

  std::size_t l = 0;
  double delta_l = delta;
  while (delta_l > params.final_delta && l < params.max_iterations) {
    PathRecord rec;
    rec.l = l;
    rec.delta_before = delta_l;
    rec.target = delta / (3.0 * std::ldexp(1.0, int(l)));
    rec.sigma2_formula = 1e4 * std::sqrt(dd * delta_l) / (zk * nn);
    rec.sigma2 = std::min(rec.sigma2_formula, 1.0 / (1600.0 * nn));

    // Perturbation process: equalize norms, then add projected noise. Retried
    // with a fresh stream when its movement or Delta exceeds the Markov bounds.
    const Frame<Scalar> equal = equalize_norms(cur);
    const double s2 = rec.sigma2;
    const double move_cap = 10.0 * 2.0 * s2 * dd * nn;
    const double delta_cap =
        100.0 * (6.0 * delta_l + 40.0 * s2 * s2 * nn * nn * std::sqrt(delta_l) +
                 1e7 * s2 * s2 * std::pow(dd, 3) * nn + 1e14 * std::pow(s2, 3) * std::pow(dd, 3) * std::pow(nn, 3));
    std::optional<PerturbResult<Scalar>> pr;
    for (std::size_t attempt = 0; attempt <= params.max_retries; ++attempt) {
      auto cand = perturb(equal, Scalar(s2), params.seed, (std::uint64_t(l) << 8) | attempt);
      const double mv = double(dist(cur, cand.frame));
      const double dw = double(delta_of(cand.frame));
      const auto res = noise_residuals(equal, cand.noise);
      const bool ok = mv <= move_cap && dw <= delta_cap && double(res.l1_z) <= 1e-9 && double(res.l2) <= 1e-9;
      rec.retries = attempt;
      pr = std::move(cand);
      if (ok) break;
    }
    const Frame<Scalar>& w = pr->frame;
    rec.perturb_dist = double(dist(cur, w));
    rec.delta_perturbed = double(delta_of(w));
    rec.capacity_lower = double(balance_lower_bound(size_of(w), delta_of(w), d, n));

    auto flowed = frame_flow(w, Scalar(rec.target), Scalar(1e6), params.flow);
    rec.delta_flowed = double(flowed.traj.back().delta);
    rec.flow_time = double(flowed.traj.back().t);
    const Scalar s_t = size_of(flowed.final_state);
    rec.rescale_factor = double(std::sqrt(Scalar(d) / s_t));
    Frame<Scalar> next = rescale_to_size(flowed.final_state, Scalar(d));
    rec.delta_after = double(delta_of(next));
    rec.s_after = double(size_of(next));
    rec.movement = double(dist(cur, next));
    rec.halving_ok = rec.delta_after <= delta / std::ldexp(1.0, int(l + 1));
    tr.iterations.push_back(rec);

    cur = std::move(next);
    delta_l = rec.delta_after;
    ++l;
  }
  tr.converged = delta_l <= params.final_delta;
  if (!tr.converged) tr.warnings.push_back("iteration cap reached before final_delta");
  out.frame = std::move(cur);
  return out;
}

}  // namespace frameflow

#endif  // FRAMEFLOW_PAULSEN_HPP_
