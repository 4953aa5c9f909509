#include <doctest.h>

#include "frameflow/capacity.hpp"
#include "frameflow/dynamics.hpp"
#include "frameflow/generators.hpp"

using namespace frameflow;

namespace {

FlowOptions fine() {
  FlowOptions o;
  o.max_delta_change = 0.002;
  o.max_samples = 50000;
  return o;
}

}  // namespace

TEST_CASE("centered derivative is exact on quadratics") {
  auto f = [](double t) { return 3 * t * t - 2 * t + 1; };
  const double t0 = 0.1, t1 = 0.25, t2 = 0.7;
  CHECK(centered_derivative(t0, f(t0), t1, f(t1), t2, f(t2)) == doctest::Approx(6 * t1 - 2).epsilon(1e-12));
}

TEST_CASE("operator flow") {
  CounterRng rng(1);
  const Index m = 3, n = 4, k = 2;
  const auto u = rescale_to_size(random_operator(m, n, k, rng), double(m));
  const auto res = operator_flow(u, 1e-10, 1e6, fine());
  const auto& tr = res.traj;
  CHECK(tr.status == FlowStatus::converged);
  CHECK(delta_of(res.final_state) <= 1e-10);
  CHECK(tr.back().delta == doctest::Approx(delta_of(res.final_state)).epsilon(1e-6));
  CHECK(tr.front().t == 0.0);
  CHECK(tr.front().s == doctest::Approx(double(m)));

  const auto chk = check_trace(tr.samples);
  CHECK(chk.s_monotone);
  CHECK(chk.delta_monotone);
  CHECK(chk.interior > 100);
  CHECK(chk.max_s_error <= 1e-5);
  CHECK(chk.max_delta_error <= 1e-4);

  // V(T) = X U Y
  for (Index l = 0; l < k; ++l)
    CHECK((tr.scaling.left * u[l] * tr.scaling.right - res.final_state[l]).cwiseAbs().maxCoeff() <= 1e-7);

  // capacity picks up det(X)^{2/m} det(Y)^{2/n}
  const double c0 = operator_capacity(u).value, c1 = operator_capacity(res.final_state).value;
  const double factor = std::exp(2 * tr.scaling.left_logdet / double(m) + 2 * tr.scaling.right_logdet / double(n));
  CHECK(c1 == doctest::Approx(c0 * factor).epsilon(1e-6));
  // the limit size is the capacity of the limit
  CHECK(tr.back().s == doctest::Approx(c1).epsilon(1e-5));
}

TEST_CASE("frame flow") {
  CounterRng rng(2);
  const auto nf = near_frame(3, 9, 0.05, rng);
  const auto f = rescale_to_size(nf.frame, 3.0);
  const auto res = frame_flow(f, 1e-12, 1e6, fine());
  const auto& tr = res.traj;
  CHECK(tr.status == FlowStatus::converged);
  CHECK(delta_of(res.final_state) <= 1e-12);
  CHECK(tr.scaling.right_diagonal);
  REQUIRE(tr.kappa_ratio.has_value());
  CHECK(*tr.kappa_ratio >= 1.0);

  const auto chk = check_trace(tr.samples);
  CHECK(chk.s_monotone);
  CHECK(chk.delta_monotone);
  CHECK(chk.max_s_error <= 1e-5);
  CHECK(chk.max_delta_error <= 1e-4);

  const Eigen::MatrixXd rebuilt = tr.scaling.left * f.vectors() * tr.scaling.right;
  CHECK((rebuilt - res.final_state.vectors()).cwiseAbs().maxCoeff() <= 1e-7);

  // movement is a path length, so it bounds the straight-line distance
  CHECK(tr.back().movement + 1e-9 >= distance(f, res.final_state));
}

TEST_CASE("matrix flow") {
  CounterRng rng(3);
  const auto a = random_nonneg(3, 5, rng, 0.2, 1.0);
  const auto a0 = NonNegMatrixd(a.entries() * (3.0 / size_of(a)));
  const auto res = matrix_flow(a0, 1e-12, 1e6, fine());
  const auto& tr = res.traj;
  CHECK(tr.status == FlowStatus::converged);
  CHECK(delta_of(res.final_state) <= 1e-12);
  const auto last = tr.squared_at(tr.samples.size() - 1);
  CHECK((last.entries() - res.final_state.entries()).cwiseAbs().maxCoeff() <= 1e-9);
  const Eigen::MatrixXd rebuilt = (2 * tr.samples.back().log_left).array().exp().matrix().asDiagonal() *
                                  a0.entries() *
                                  (2 * tr.samples.back().log_right).array().exp().matrix().asDiagonal();
  CHECK((rebuilt - last.entries()).cwiseAbs().maxCoeff() <= 1e-12);

  const auto chk = check_trace(tr.samples);
  CHECK(chk.s_monotone);
  CHECK(chk.delta_monotone);
  CHECK(chk.max_s_error <= 1e-5);
  CHECK(chk.max_delta_error <= 1e-4);

  // capacity of the flowed matrix, scaled back, equals that of the start
  const double c0 = matrix_capacity(a0).value, c1 = matrix_capacity(res.final_state).value;
  const auto& s = tr.samples.back();
  const double factor = std::exp(2 * s.log_left.sum() / 3.0 + 2 * s.log_right.sum() / 5.0);
  CHECK(c1 == doctest::Approx(c0 * factor).epsilon(1e-8));
}

TEST_CASE("flow stops at the time limit") {
  CounterRng rng(4);
  const auto u = random_operator(2, 3, 2, rng);
  const auto res = operator_flow(u, 1e-30, 1e-3);
  CHECK(res.traj.status == FlowStatus::time_limit);
  CHECK(res.traj.back().t == doctest::Approx(1e-3));
  CHECK(res.traj.back().delta < res.traj.front().delta);
}

TEST_CASE("flow on a balanced input is immediate") {
  const OperatorTupled u({Eigen::MatrixXd::Identity(2, 2)});
  const auto res = operator_flow(u, 1e-10);
  CHECK(res.traj.status == FlowStatus::converged);
  CHECK(res.traj.samples.size() >= 1);
  CHECK(res.traj.back().t == 0.0);
}

TEST_CASE("pseudorandom rate along a matrix flow") {
  CounterRng rng(5);
  const auto a = random_nonneg(4, 6, rng, 0.5, 1.0);
  const auto a0 = NonNegMatrixd(a.entries() * (4.0 / size_of(a)));
  const auto res = matrix_flow(a0, 1e-12);
  const double alpha = a0.entries().minCoeff() * 0.5;
  const auto strong = rate_monitor(res.traj, alpha, RateVariant::strong);
  CHECK(strong.samples == res.traj.samples.size());
  CHECK(strong.precondition_held > 0);
  CHECK(strong.ok());
  CHECK(strong.min_ratio_mn >= kStrongRateConstant);
  const auto weak = rate_monitor(res.traj, alpha, RateVariant::weak);
  CHECK(weak.ok());

  const auto op = operator_flow(random_operator(2, 2, 1, rng), 1e-6);
  CHECK_THROWS_AS(rate_monitor(op.traj, 0.1, RateVariant::strong), std::invalid_argument);
}
