#include <doctest.h>

#include "frameflow/capacity.hpp"
#include "frameflow/discrete_scaling.hpp"
#include "frameflow/generators.hpp"
#include "frameflow/pseudorandom.hpp"

using namespace frameflow;

TEST_CASE("sinkhorn balances a positive matrix") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed);
    const Index m = 2 + Index(seed % 4), n = 3 + Index(seed % 3);
    const auto a = random_nonneg(m, n, rng, 0.1, 1.0);
    const auto r = sinkhorn(a, 1e-20);
    REQUIRE(r.report.converged);
    CHECK(delta_of(r.scaled) <= 1e-20);
    CHECK(size_of(r.scaled) == doctest::Approx(size_of(a)).epsilon(1e-12));
    // the reported scaling reproduces the result
    const Eigen::MatrixXd rebuilt =
        r.log_x.array().exp().matrix().asDiagonal() * a.entries() * r.log_y.array().exp().matrix().asDiagonal();
    CHECK((rebuilt - r.scaled.entries()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((r.scaling.left - Eigen::MatrixXd(r.log_x.array().exp().matrix().asDiagonal())).norm() <= 1e-14);
    CHECK(r.scaling.left_diagonal);
    CHECK(r.scaling.left_logdet == doctest::Approx(r.log_x.sum()));
    const double s = size_of(a);
    CHECK((r.scaled.row_sums().array() - s / double(m)).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("sinkhorn on a balanced matrix does nothing") {
  const NonNegMatrixd a(Eigen::MatrixXd::Constant(3, 3, 0.5));
  const auto r = sinkhorn(a, 1e-12);
  CHECK(r.report.iterations == 0);
  CHECK(r.report.converged);
}

TEST_CASE("sinkhorn rejects a zero row or column") {
  Eigen::MatrixXd e = Eigen::MatrixXd::Ones(3, 3);
  e.col(1).setZero();
  CHECK_THROWS_AS(sinkhorn(NonNegMatrixd(e), 1e-10), DegenerateInput);
  CHECK_THROWS_AS(sinkhorn(NonNegMatrixd(Eigen::MatrixXd::Ones(2, 2)), 0.0), std::invalid_argument);
}

TEST_CASE("sinkhorn reports non-convergence on a zero-permanent support") {
  // no zero line, but rows 2 and 3 share their only column: no perfect matching
  Eigen::MatrixXd e(3, 3);
  e << 1, 1, 1,
       1, 0, 0,
       1, 0, 0;
  const auto r = sinkhorn(NonNegMatrixd(e), 1e-12, 2000);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 2000);
  CHECK(r.report.final_delta > 1e-12);
  CHECK(capacity_zero_check(NonNegMatrixd(e)).has_value());
}

TEST_CASE("operator sinkhorn") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    CounterRng rng(seed);
    const Index m = 2 + Index(seed % 3), n = 2 + Index(seed % 4), k = 2 + Index(seed % 2);
    const auto u = random_operator(m, n, k, rng);
    const auto r = operator_sinkhorn(u, 1e-20);
    REQUIRE(r.report.converged);
    CHECK(delta_of(r.scaled) <= 1e-20);
    for (Index l = 0; l < k; ++l)
      CHECK((r.scaling.left * u[l] * r.scaling.right - r.scaled[l]).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(r.scaling.left_logdet == doctest::Approx(log_abs_det(r.scaling.left)).epsilon(1e-10));
    CHECK(r.scaling.right_logdet == doctest::Approx(log_abs_det(r.scaling.right)).epsilon(1e-10));
    // right step leaves sum V^T V = (m/n) I
    const Eigen::MatrixXd bn = right_gram(r.scaled);
    CHECK((bn - double(m) / double(n) * Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-9);
  }
}

TEST_CASE("operator sinkhorn on a frame embedding keeps diagonal right scaling") {
  CounterRng rng(4);
  const Framed f(gaussian_matrix(3, 6, rng));
  const auto r = operator_sinkhorn(frame_to_operator(f), 1e-18);
  REQUIRE(r.report.converged);
  const Eigen::MatrixXd rr = r.scaling.right * r.scaling.right.transpose();
  CHECK((rr - Eigen::MatrixXd(rr.diagonal().asDiagonal())).norm() <= 1e-10 * rr.norm());
}

TEST_CASE("frame alternating scaling") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    CounterRng rng(seed);
    const Framed f(gaussian_matrix(3, 8, rng));
    const auto r = frame_alternating(f, 1e-22);
    REQUIRE(r.report.converged);
    CHECK(eps_nearness(r.scaled) <= 1e-10);
    CHECK(size_of(r.scaled) == doctest::Approx(3.0).epsilon(1e-12));
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Ones(2, 3);
  v.col(2).setZero();
  CHECK_THROWS_AS(frame_alternating(Framed(v), 1e-10), DegenerateInput);
}

TEST_CASE("pseudorandom certification") {
  Eigen::MatrixXd e = Eigen::MatrixXd::Constant(4, 5, 0.5);
  const NonNegMatrixd a(e);
  auto r = certify_pseudorandom(a, 0.5, 0.0);
  CHECK(r.holds);
  CHECK(r.strong_holds);
  CHECK(r.worst_row_deficit == 0);
  CHECK(r.weak_columns == 0);
  CHECK_FALSE(certify_pseudorandom(a, 0.6, 0.0).holds);

  e(0, 0) = 0.1;  // one small entry in row 0
  const NonNegMatrixd b(e);
  r = certify_pseudorandom(b, 0.5, 0.0);
  CHECK_FALSE(r.holds);
  CHECK(r.worst_row_deficit == 1);
  CHECK(certify_pseudorandom(b, 0.5, 0.2).holds);  // 0.2 * 5 = 1 allowed
  CHECK_FALSE(r.strong_holds);
  CHECK(r.weak_columns == 1);
  // the column maximum still reaches alpha
  CHECK(r.worst_column_max == doctest::Approx(0.5));

  CHECK_THROWS(certify_pseudorandom(a, 0.0, 0.1));
  CHECK_THROWS(certify_pseudorandom(a, 0.5, 1.5));
}
