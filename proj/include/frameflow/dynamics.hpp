#ifndef FRAMEFLOW_DYNAMICS_HPP_
#define FRAMEFLOW_DYNAMICS_HPP_

#include "frameflow/discrete_scaling.hpp"
#include "frameflow/pseudorandom.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace frameflow {

struct FlowOptions {
  double max_delta_change = 0.05;  // per accepted step, relative
  double error_tol = 1e-8;         // step-doubling estimate, relative to max(1, |state|)
  std::size_t max_samples = 10000;
  double initial_step = 0;  // 0 picks a step from the initial rate
  std::size_t max_steps = 20000000;
};

enum class FlowStatus { converged, time_limit, step_limit };
enum class FlowKind { operator_flow, frame_flow, matrix_flow };

template <typename Scalar>
struct TrajectorySample {
  Scalar t = 0;
  Scalar s = 0;
  Scalar delta = 0;
  Scalar ds_dt = 0;
  Scalar ddelta_dt = 0;
  Scalar movement = 0;  // path length of the flowed object so far
  Scalar logdet_x = 0;
  Scalar logdet_y = 0;
  VectorX<Scalar> log_left;   // matrix flow: int (s - m r_i) dt
  VectorX<Scalar> log_right;  // matrix flow: int (s - n c_j) dt
};

template <typename Scalar>
struct Trajectory {
  FlowKind kind = FlowKind::operator_flow;
  std::vector<TrajectorySample<Scalar>> samples;
  ScalingPair<Scalar> scaling;           // X(T), Y(T)
  std::optional<Scalar> kappa_ratio;     // diagonal flows only
  FlowStatus status = FlowStatus::converged;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  MatrixX<Scalar> initial_squared;  // matrix flow: A0sq

  const TrajectorySample<Scalar>& front() const { return samples.front(); }
  const TrajectorySample<Scalar>& back() const { return samples.back(); }

  /// A^{o2} at a recorded sample of a matrix flow.
  NonNegMatrix<Scalar> squared_at(std::size_t i) const {
    const auto& smp = samples.at(i);
    const VectorX<Scalar> x = (Scalar(2) * smp.log_left).array().exp();
    const VectorX<Scalar> y = (Scalar(2) * smp.log_right).array().exp();
    return NonNegMatrix<Scalar>(x.asDiagonal() * initial_squared * y.asDiagonal());
  }
};

template <typename Object>
struct FlowResult {
  Object final_state;
  Trajectory<typename Object::Matrix::Scalar> traj;
};

namespace detail {

template <typename Scalar>
struct FlowMonitor {
  Scalar s = 0, delta = 0, ds_dt = 0, ddelta_dt = 0, speed = 0, logdet_x = 0, logdet_y = 0;
};

/// Flowed operator U_1..U_k followed by X (m x m) and Y (n x n), column-major.
template <typename Scalar>
struct OperatorSystem {
  Index m, n, k;

  Index object_size() const { return k * m * n; }

  void split(const VectorX<Scalar>& y, std::vector<MatrixX<Scalar>>& u, MatrixX<Scalar>& bm,
             MatrixX<Scalar>& bn) const {
    u.resize(std::size_t(k));
    bm.setZero(m, m);
    bn.setZero(n, n);
    for (Index i = 0; i < k; ++i) {
      u[std::size_t(i)] = Eigen::Map<const MatrixX<Scalar>>(y.data() + i * m * n, m, n);
      bm.noalias() += u[std::size_t(i)] * u[std::size_t(i)].transpose();
      bn.noalias() += u[std::size_t(i)].transpose() * u[std::size_t(i)];
    }
  }

  void drifts(const MatrixX<Scalar>& bm, const MatrixX<Scalar>& bn, MatrixX<Scalar>& cm,
              MatrixX<Scalar>& cn, Scalar& s) const {
    s = bm.trace();
    cm = -Scalar(m) * bm;
    cm.diagonal().array() += s;
    cn = -Scalar(n) * bn;
    cn.diagonal().array() += s;
  }

  void rhs(const VectorX<Scalar>& y, VectorX<Scalar>& dy, FlowMonitor<Scalar>* mon = nullptr) const {
    std::vector<MatrixX<Scalar>> u;
    MatrixX<Scalar> bm, bn, cm, cn;
    Scalar s;
    split(y, u, bm, bn);
    drifts(bm, bn, cm, cn, s);
    dy.resize(y.size());
    Scalar speed2 = 0;
    for (Index i = 0; i < k; ++i) {
      Eigen::Map<MatrixX<Scalar>> du(dy.data() + i * m * n, m, n);
      du.noalias() = cm * u[std::size_t(i)];
      du.noalias() += u[std::size_t(i)] * cn;
      speed2 += du.squaredNorm();
    }
    const Index off = object_size();
    Eigen::Map<const MatrixX<Scalar>> x(y.data() + off, m, m);
    Eigen::Map<const MatrixX<Scalar>> yy(y.data() + off + m * m, n, n);
    Eigen::Map<MatrixX<Scalar>>(dy.data() + off, m, m).noalias() = cm * x;
    Eigen::Map<MatrixX<Scalar>>(dy.data() + off + m * m, n, n).noalias() = yy * cn;
    if (mon) {
      mon->s = s;
      mon->delta = cm.squaredNorm() / Scalar(m) + cn.squaredNorm() / Scalar(n);
      mon->ds_dt = -Scalar(2) * mon->delta;
      mon->ddelta_dt = -Scalar(4) * speed2;
      mon->speed = std::sqrt(speed2);
      mon->logdet_x = log_abs_det(MatrixX<Scalar>(x));
      mon->logdet_y = log_abs_det(MatrixX<Scalar>(yy));
    }
  }

  void extras(const VectorX<Scalar>&, TrajectorySample<Scalar>&) const {}
};

/// Flowed vectors (d x n), X (d x d), log of the diagonal of Y (n).
template <typename Scalar>
struct FrameSystem {
  Index d, n;

  Index object_size() const { return d * n; }

  void rhs(const VectorX<Scalar>& y, VectorX<Scalar>& dy, FlowMonitor<Scalar>* mon = nullptr) const {
    Eigen::Map<const MatrixX<Scalar>> v(y.data(), d, n);
    Eigen::Map<const MatrixX<Scalar>> x(y.data() + d * n, d, d);
    const MatrixX<Scalar> S = v * v.transpose();
    const Scalar s = S.trace();
    MatrixX<Scalar> cm = -Scalar(d) * S;
    cm.diagonal().array() += s;
    const VectorX<Scalar> c =
        (s - Scalar(n) * v.colwise().squaredNorm().array()).matrix().transpose();
    dy.resize(y.size());
    Eigen::Map<MatrixX<Scalar>> dv(dy.data(), d, n);
    dv.noalias() = cm * v;
    dv += v * c.asDiagonal();
    Eigen::Map<MatrixX<Scalar>>(dy.data() + d * n, d, d).noalias() = cm * x;
    dy.segment(d * n + d * d, n) = c;
    if (mon) {
      mon->s = s;
      mon->delta = cm.squaredNorm() / Scalar(d) + c.squaredNorm() / Scalar(n);
      mon->ds_dt = -Scalar(2) * mon->delta;
      const Scalar speed2 = dv.squaredNorm();
      mon->ddelta_dt = -Scalar(4) * speed2;
      mon->speed = std::sqrt(speed2);
      mon->logdet_x = log_abs_det(MatrixX<Scalar>(x));
      mon->logdet_y = y.segment(d * n + d * d, n).sum();
    }
  }

  void extras(const VectorX<Scalar>&, TrajectorySample<Scalar>&) const {}
};

/// Row exponents a (m) and column exponents b (n); A^{o2}(t) = e^{2a_i + 2b_j} A0sq.
template <typename Scalar>
struct MatrixSystem {
  const MatrixX<Scalar>* a0sq;
  Index m, n;

  Index object_size() const { return m + n; }

  MatrixX<Scalar> squared(const VectorX<Scalar>& y) const {
    const VectorX<Scalar> x = (Scalar(2) * y.head(m)).array().exp();
    const VectorX<Scalar> z = (Scalar(2) * y.tail(n)).array().exp();
    return x.asDiagonal() * (*a0sq) * z.asDiagonal();
  }

  void rhs(const VectorX<Scalar>& y, VectorX<Scalar>& dy, FlowMonitor<Scalar>* mon = nullptr) const {
    const MatrixX<Scalar> q = squared(y);
    const Scalar s = q.sum();
    const VectorX<Scalar> r = q.rowwise().sum();
    const VectorX<Scalar> c = q.colwise().sum().transpose();
    dy.resize(y.size());
    dy.head(m) = (s - Scalar(m) * r.array()).matrix();
    dy.tail(n) = (s - Scalar(n) * c.array()).matrix();
    if (mon) {
      mon->s = s;
      mon->delta = dy.head(m).squaredNorm() / Scalar(m) + dy.tail(n).squaredNorm() / Scalar(n);
      mon->ds_dt = -Scalar(2) * mon->delta;
      Scalar speed2 = 0;
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) {
          const Scalar e = dy(i) + dy(m + j);
          speed2 += e * e * q(i, j);
        }
      mon->ddelta_dt = -Scalar(4) * speed2;
      mon->speed = std::sqrt(speed2);
      mon->logdet_x = y.head(m).sum();
      mon->logdet_y = y.tail(n).sum();
    }
  }

  void extras(const VectorX<Scalar>& y, TrajectorySample<Scalar>& smp) const {
    smp.log_left = y.head(m);
    smp.log_right = y.tail(n);
  }
};

template <typename Scalar>
class SampleRecorder {
 public:
  SampleRecorder(std::vector<TrajectorySample<Scalar>>& out, std::size_t cap)
      : out_(out), cap_(std::max<std::size_t>(cap, 3)) {}

  void offer(TrajectorySample<Scalar> smp, bool force) {
    ++count_;
    if (!force && count_ % stride_ != 0) {
      pending_ = std::move(smp);
      return;
    }
    pending_.reset();
    out_.push_back(std::move(smp));
    if (out_.size() > cap_) {
      std::vector<TrajectorySample<Scalar>> kept;
      for (std::size_t i = 0; i < out_.size(); i += 2) kept.push_back(std::move(out_[i]));
      out_ = std::move(kept);
      stride_ *= 2;
    }
  }

  void finish() {
    if (pending_) out_.push_back(std::move(*pending_));
    pending_.reset();
  }

 private:
  std::vector<TrajectorySample<Scalar>>& out_;
  std::size_t cap_;
  std::size_t stride_ = 1;
  std::size_t count_ = 0;
  std::optional<TrajectorySample<Scalar>> pending_;
};

template <typename System, typename Scalar>
VectorX<Scalar> rk4_step(const System& sys, const VectorX<Scalar>& y, Scalar h) {
  VectorX<Scalar> k1, k2, k3, k4;
  sys.rhs(y, k1);
  sys.rhs(VectorX<Scalar>(y + (h / 2) * k1), k2);
  sys.rhs(VectorX<Scalar>(y + (h / 2) * k2), k3);
  sys.rhs(VectorX<Scalar>(y + h * k3), k4);
  return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

/// Adaptive RK4 with step doubling. A step is accepted when the doubling
/// error estimate is within opts.error_tol and Delta changes by at most
/// opts.max_delta_change relative.
template <typename System, typename Scalar>
VectorX<Scalar> integrate(const System& sys, VectorX<Scalar> y, Scalar target_delta, Scalar t_max,
                          const FlowOptions& opts, Trajectory<Scalar>& traj) {
  if (!(target_delta > Scalar(0))) throw std::invalid_argument("flow: target_delta must be positive");
  const Index obj = sys.object_size();
  VectorX<Scalar> dy;
  FlowMonitor<Scalar> mon;
  sys.rhs(y, dy, &mon);

  auto make_sample = [&](Scalar t, const FlowMonitor<Scalar>& mo, Scalar movement,
                         const VectorX<Scalar>& state) {
    TrajectorySample<Scalar> smp;
    smp.t = t;
    smp.s = mo.s;
    smp.delta = mo.delta;
    smp.ds_dt = mo.ds_dt;
    smp.ddelta_dt = mo.ddelta_dt;
    smp.movement = movement;
    smp.logdet_x = mo.logdet_x;
    smp.logdet_y = mo.logdet_y;
    sys.extras(state, smp);
    return smp;
  };

  SampleRecorder<Scalar> recorder(traj.samples, opts.max_samples);
  recorder.offer(make_sample(Scalar(0), mon, Scalar(0), y), true);

  Scalar t = 0, movement = 0;
  Scalar h = Scalar(opts.initial_step);
  if (!(h > Scalar(0))) {
    h = mon.ddelta_dt < Scalar(0) ? Scalar(0.5 * opts.max_delta_change) * mon.delta / -mon.ddelta_dt
                                  : Scalar(1);
  }
  const Scalar tol = Scalar(opts.error_tol);
  const Scalar max_change = Scalar(opts.max_delta_change);
  traj.status = FlowStatus::converged;

  while (mon.delta > target_delta) {
    if (t >= t_max) {
      traj.status = FlowStatus::time_limit;
      break;
    }
    if (traj.accepted_steps + traj.rejected_steps >= opts.max_steps) {
      traj.status = FlowStatus::step_limit;
      break;
    }
    const Scalar hh = std::min(h, t_max - t);
    const VectorX<Scalar> y_full = rk4_step(sys, y, hh);
    const VectorX<Scalar> y_mid = rk4_step(sys, y, hh / 2);
    VectorX<Scalar> y_new = rk4_step(sys, y_mid, hh / 2);

    bool ok = y_new.allFinite() && y_full.allFinite();
    Scalar err = std::numeric_limits<Scalar>::infinity();
    Scalar rel = std::numeric_limits<Scalar>::infinity();
    FlowMonitor<Scalar> mon_new, mon_mid;
    if (ok) {
      const Scalar scale = std::max(Scalar(1), y_new.head(obj).norm());
      err = (y_new.head(obj) - y_full.head(obj)).norm() / scale;
      sys.rhs(y_new, dy, &mon_new);
      ok = std::isfinite(mon_new.delta);
      if (ok) rel = std::abs(mon_new.delta - mon.delta) / mon.delta;
    }

    if (ok && err <= tol && rel <= max_change) {
      sys.rhs(y_mid, dy, &mon_mid);
      movement += hh / 6 * (mon.speed + 4 * mon_mid.speed + mon_new.speed);
      t += hh;
      y = std::move(y_new);
      mon = mon_new;
      ++traj.accepted_steps;
      const bool last = mon.delta <= target_delta || t >= t_max;
      recorder.offer(make_sample(t, mon, movement, y), last);
      Scalar factor = 2;
      if (err > 0) factor = std::min(factor, Scalar(0.9) * std::pow(tol / err, Scalar(0.2)));
      if (rel > 0) factor = std::min(factor, Scalar(0.9) * max_change / rel);
      h = hh * std::max(factor, Scalar(0.2));
    } else {
      ++traj.rejected_steps;
      Scalar factor = 0.5;
      if (ok && err > tol) factor = std::min(factor, Scalar(0.9) * std::pow(tol / err, Scalar(0.2)));
      if (ok && rel > max_change) factor = std::min(factor, Scalar(0.9) * max_change / rel);
      h = hh * std::max(factor, Scalar(0.1));
      if (!(h > Scalar(1e-15) * std::max(Scalar(1), t)))
        throw NumericFailure("flow: step size collapsed");
    }
  }
  recorder.finish();
  return y;
}

}  // namespace detail

/// dU_i/dt = C_m U_i + U_i C_n with C_m = sI - m sum U U^T, C_n = sI - n sum U^T U.
template <typename Scalar>
FlowResult<OperatorTuple<Scalar>> operator_flow(const OperatorTuple<Scalar>& u0, Scalar target_delta,
                                                Scalar t_max = Scalar(1e6),
                                                const FlowOptions& opts = {}) {
  const Index m = u0.m(), n = u0.n(), k = u0.k();
  detail::OperatorSystem<Scalar> sys{m, n, k};
  VectorX<Scalar> y(k * m * n + m * m + n * n);
  for (Index i = 0; i < k; ++i)
    Eigen::Map<MatrixX<Scalar>>(y.data() + i * m * n, m, n) = u0[i];
  Eigen::Map<MatrixX<Scalar>>(y.data() + k * m * n, m, m).setIdentity();
  Eigen::Map<MatrixX<Scalar>>(y.data() + k * m * n + m * m, n, n).setIdentity();

  FlowResult<OperatorTuple<Scalar>> out;
  out.traj.kind = FlowKind::operator_flow;
  y = detail::integrate(sys, std::move(y), target_delta, t_max, opts, out.traj);

  std::vector<MatrixX<Scalar>> mats;
  for (Index i = 0; i < k; ++i)
    mats.push_back(Eigen::Map<const MatrixX<Scalar>>(y.data() + i * m * n, m, n));
  out.final_state = OperatorTuple<Scalar>(std::move(mats));
  auto& sc = out.traj.scaling;
  sc.left = Eigen::Map<const MatrixX<Scalar>>(y.data() + k * m * n, m, m);
  sc.right = Eigen::Map<const MatrixX<Scalar>>(y.data() + k * m * n + m * m, n, n);
  sc.left_logdet = log_abs_det(sc.left);
  sc.right_logdet = log_abs_det(sc.right);
  return out;
}

/// du_i/dt = (sI - dS) u_i + (s - n|u_i|^2) u_i; the right scaling is diagonal.
template <typename Scalar>
FlowResult<Frame<Scalar>> frame_flow(const Frame<Scalar>& f0, Scalar target_delta,
                                     Scalar t_max = Scalar(1e6), const FlowOptions& opts = {}) {
  const Index d = f0.d(), n = f0.n();
  detail::FrameSystem<Scalar> sys{d, n};
  VectorX<Scalar> y = VectorX<Scalar>::Zero(d * n + d * d + n);
  Eigen::Map<MatrixX<Scalar>>(y.data(), d, n) = f0.vectors();
  Eigen::Map<MatrixX<Scalar>>(y.data() + d * n, d, d).setIdentity();

  FlowResult<Frame<Scalar>> out;
  out.traj.kind = FlowKind::frame_flow;
  y = detail::integrate(sys, std::move(y), target_delta, t_max, opts, out.traj);

  out.final_state = Frame<Scalar>(Eigen::Map<const MatrixX<Scalar>>(y.data(), d, n));
  auto& sc = out.traj.scaling;
  sc.left = Eigen::Map<const MatrixX<Scalar>>(y.data() + d * n, d, d);
  sc.left_logdet = log_abs_det(sc.left);
  const VectorX<Scalar> log_y = y.segment(d * n + d * d, n);
  sc.right = log_y.array().exp().matrix().asDiagonal();
  sc.right_diagonal = true;
  sc.right_logdet = log_y.sum();
  out.traj.kappa_ratio = std::exp(log_y.maxCoeff() - log_y.minCoeff());
  return out;
}

/// Flows A with A^{o2} = a0sq: d(log A_ij)/dt = 2s - m r_i - n c_j, where s, r, c
/// are of A^{o2}. Returns the final A^{o2}.
template <typename Scalar>
FlowResult<NonNegMatrix<Scalar>> matrix_flow(const NonNegMatrix<Scalar>& a0sq, Scalar target_delta,
                                             Scalar t_max = Scalar(1e6),
                                             const FlowOptions& opts = {}) {
  const Index m = a0sq.m(), n = a0sq.n();
  FlowResult<NonNegMatrix<Scalar>> out;
  out.traj.kind = FlowKind::matrix_flow;
  out.traj.initial_squared = a0sq.entries();
  detail::MatrixSystem<Scalar> sys{&out.traj.initial_squared, m, n};
  VectorX<Scalar> y = VectorX<Scalar>::Zero(m + n);
  y = detail::integrate(sys, std::move(y), target_delta, t_max, opts, out.traj);

  out.final_state = NonNegMatrix<Scalar>(sys.squared(y));
  const VectorX<Scalar> a = y.head(m), b = y.tail(n);
  out.traj.scaling = ScalingPair<Scalar>::from_log_diagonals(a, b);
  out.traj.kappa_ratio =
      std::exp(std::max(a.maxCoeff() - a.minCoeff(), b.maxCoeff() - b.minCoeff()));
  return out;
}

// ---------------------------------------------------------------------------
// monitors

/// Three-point derivative on a possibly nonuniform grid at interior index k.
template <typename Scalar>
Scalar centered_derivative(Scalar t0, Scalar f0, Scalar t1, Scalar f1, Scalar t2, Scalar f2) {
  const Scalar h1 = t1 - t0, h2 = t2 - t1;
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

struct TraceCheck {
  double max_s_error = 0;      // max |FD(s) + 2 Delta| / max(1, Delta)
  double max_delta_error = 0;  // max |FD(Delta) - dDelta/dt| / max(1, Delta)
  bool delta_monotone = true;
  bool s_monotone = true;
  std::size_t interior = 0;
};

/// Checks the recorded samples against ds/dt = -2 Delta and the recorded
/// dDelta/dt by finite differences, plus monotonicity of s and Delta.
/// `slack` absorbs last-digit noise in the monotonicity comparison.
template <typename Sample>
TraceCheck check_trace(const std::vector<Sample>& smp, double slack = 1e-13) {
  TraceCheck r;
  for (std::size_t i = 1; i < smp.size(); ++i) {
    if (double(smp[i].delta) > double(smp[i - 1].delta) * (1 + slack) + 1e-300) r.delta_monotone = false;
    if (double(smp[i].s) > double(smp[i - 1].s) + slack * std::abs(double(smp[i - 1].s)))
      r.s_monotone = false;
  }
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    const auto& a = smp[i - 1];
    const auto& b = smp[i];
    const auto& c = smp[i + 1];
    const double scale = std::max(1.0, double(b.delta));
    const double fs = double(centered_derivative(a.t, a.s, b.t, b.s, c.t, c.s));
    const double fd = double(centered_derivative(a.t, a.delta, b.t, b.delta, c.t, c.delta));
    r.max_s_error = std::max(r.max_s_error, std::abs(fs + 2 * double(b.delta)) / scale);
    r.max_delta_error = std::max(r.max_delta_error, std::abs(fd - double(b.ddelta_dt)) / scale);
    ++r.interior;
  }
  return r;
}

enum class RateVariant { strong, weak };

struct RateReport {
  double alpha = 0;
  RateVariant variant = RateVariant::strong;
  double min_ratio_n = std::numeric_limits<double>::infinity();   // -dDelta/dt / (alpha n Delta)
  double min_ratio_mn = std::numeric_limits<double>::infinity();  // -dDelta/dt / (alpha m n Delta)
  double decay_kappa = std::numeric_limits<double>::infinity();   // min -ln(Delta(t)/Delta(0)) / (alpha n t)
  std::size_t samples = 0;
  std::size_t precondition_held = 0;
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

constexpr double kStrongRateConstant = 1.0 / 32000.0;
constexpr double kWeakRateConstant = 1.0 / 8192000.0;
constexpr double kWeakBeta = 1e-9;

/// Checks the pseudorandom rate inequalities at every sample of a matrix flow
/// where the corresponding precondition holds for the current A^{o2}.
template <typename Scalar>
RateReport rate_monitor(const Trajectory<Scalar>& traj, Scalar alpha, RateVariant variant) {
  if (traj.kind != FlowKind::matrix_flow) throw std::invalid_argument("rate_monitor: needs a matrix flow");
  RateReport rep;
  rep.alpha = double(alpha);
  rep.variant = variant;
  const double m = double(traj.initial_squared.rows()), n = double(traj.initial_squared.cols());
  const double delta0 = double(traj.samples.front().delta);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& smp = traj.samples[i];
    ++rep.samples;
    const double delta = double(smp.delta);
    const double rate = -double(smp.ddelta_dt);
    const auto pr = certify_pseudorandom(traj.squared_at(i), alpha, Scalar(kWeakBeta));
    const bool pre = variant == RateVariant::strong ? pr.strong_holds : pr.holds;
    if (!pre) continue;
    ++rep.precondition_held;
    if (delta <= 0) continue;
    const double rn = rate / (double(alpha) * n * delta);
    const double rmn = rn / m;
    rep.min_ratio_n = std::min(rep.min_ratio_n, rn);
    rep.min_ratio_mn = std::min(rep.min_ratio_mn, rmn);
    const bool bad = variant == RateVariant::strong ? rmn < kStrongRateConstant * (1 - 1e-12)
                                                    : rn < kWeakRateConstant * (1 - 1e-12);
    if (bad) ++rep.violations;
    if (smp.t > 0 && delta0 > 0)
      rep.decay_kappa =
          std::min(rep.decay_kappa, -std::log(delta / delta0) / (double(alpha) * n * double(smp.t)));
  }
  return rep;
}

}  // namespace frameflow

#endif  // FRAMEFLOW_DYNAMICS_HPP_
