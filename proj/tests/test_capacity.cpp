#include <doctest.h>

#include "frameflow/capacity.hpp"
#include "frameflow/generators.hpp"
#include "frameflow/paulsen.hpp"

#include <algorithm>
#include <numeric>

using namespace frameflow;

namespace {

double permanent(const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  std::vector<Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index(0));
  double total = 0;
  do {
    double prod = 1;
    for (Index i = 0; i < n; ++i) prod *= a(i, p[std::size_t(i)]);
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

double factorial(Index n) {
  double r = 1;
  for (Index i = 2; i <= n; ++i) r *= double(i);
  return r;
}

}  // namespace

TEST_CASE("diagonal 2x2") {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2, 2);
  e(0, 0) = 2;
  e(1, 1) = 8;
  const auto r = matrix_capacity(NonNegMatrixd(e));
  CHECK(r.method == CapacityMethod::scaling_based);
  CHECK(r.value == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(r.lower <= r.value + 1e-12);
  CHECK(r.value <= r.upper + 1e-12);
}

TEST_CASE("van der Waerden sandwich against the permanent") {
  // with c = cap / n: n!/n^n c^n <= per(A) <= c^n
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CounterRng rng(seed);
    const Index n = 2 + Index(seed % 4);
    const auto a = random_nonneg(n, n, rng, 0.0, 1.0, seed % 3 == 0 ? 0.5 : 0.0);
    const double per = permanent(a.entries());
    const auto r = matrix_capacity(a);
    const bool zero = zero_capacity_certificate(a).has_value();
    CHECK(zero == (per == 0.0));
    if (zero) {
      CHECK(r.value == 0.0);
      CHECK(r.method == CapacityMethod::zero_detected);
      REQUIRE(r.certificate.has_value());
      CHECK(verify_certificate(a, *r.certificate));
      continue;
    }
    const double cn = std::pow(r.value / double(n), double(n));
    CHECK(per <= cn * (1 + 1e-8));
    CHECK(per >= factorial(n) / std::pow(double(n), double(n)) * cn * (1 - 1e-8));
  }
}

TEST_CASE("scaling and convex capacity agree") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed);
    const auto a = random_nonneg(2 + Index(seed % 3), 3 + Index(seed % 4), rng, 0.05, 1.0);
    const double scaled = matrix_capacity(a).value;
    const auto cv = matrix_capacity_convex(a);
    CHECK(cv.settled());
    CHECK_FALSE(cv.diverged);
    CHECK(cv.value == doctest::Approx(scaled).epsilon(1e-9));
  }
}

TEST_CASE("diagonal form equals n times the geometric mean") {
  CounterRng rng(8);
  const Eigen::VectorXd v = uniform_matrix(5, 1, rng, 0.5, 2.0);
  const NonNegMatrixd a(Eigen::MatrixXd(v.asDiagonal()));
  CHECK(matrix_capacity(a).value == doctest::Approx(5.0 * std::exp(v.array().log().mean())).epsilon(1e-10));
}

TEST_CASE("Hall certificates") {
  Eigen::MatrixXd e(3, 3);
  e << 1, 0, 0,
       1, 0, 0,
       1, 1, 1;
  const NonNegMatrixd a(e);
  const auto c = capacity_zero_check(a);
  REQUIRE(c.has_value());
  CHECK(verify_certificate(a, *c));
  CHECK(c->rows == std::vector<Index>{0, 1});
  CHECK(c->cols == std::vector<Index>{1, 2});
  CHECK(matrix_capacity(a).value == 0.0);

  // a mis-sized or non-zero block is rejected
  HallCertificate bad{{0}, {0}, 3};
  CHECK_FALSE(verify_certificate(a, bad));
  HallCertificate small{{0}, {1}, 3};
  CHECK_FALSE(verify_certificate(a, small));

  // [[1,0],[0,0]]: the zero second row against both columns
  Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(2, 2);
  corner(0, 0) = 1;
  const NonNegMatrixd b(corner);
  const auto cb = capacity_zero_check(b);
  REQUIRE(cb.has_value());
  CHECK(cb->rows == std::vector<Index>{1});
  CHECK(cb->cols == std::vector<Index>{0, 1});
  CHECK(verify_certificate(b, *cb));
  CHECK_FALSE(verify_certificate(b, HallCertificate{{1}, {1}, 2}));  // one row, one column: too small
  CHECK(matrix_capacity(b).value == 0.0);

  CHECK_FALSE(capacity_zero_check(NonNegMatrixd(Eigen::MatrixXd::Identity(4, 4))).has_value());
  CHECK_THROWS(capacity_zero_check(NonNegMatrixd(Eigen::MatrixXd::Ones(2, 3))));
}

TEST_CASE("tensor square keeps size, Delta and capacity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed);
    const Index m = 2 + Index(seed % 3), n = 3 + Index(seed % 2);
    const auto a = random_nonneg(m, n, rng, 0.0, 1.0, 0.3);
    const auto b = tensor_square(a);
    CHECK(b.m() == b.n());
    CHECK(b.m() == m * n / std::gcd(m, n));
    CHECK(size_of(b) == doctest::Approx(size_of(a)).epsilon(1e-13));
    CHECK(delta_of(b) == doctest::Approx(delta_of(a)).epsilon(1e-11));
    if (!zero_capacity_certificate(a)) {
      CHECK(matrix_capacity(b).value == doctest::Approx(matrix_capacity(a).value).epsilon(1e-8));
    } else {
      CHECK(matrix_capacity(a).value == 0.0);
    }
  }
}

TEST_CASE("tight example") {
  for (int k = 1; k <= 6; ++k) {
    const auto t = tight_example(k);
    CHECK(size_of(t.A) == doctest::Approx(1.0).epsilon(1e-14));
    const double kk = k;
    CHECK(delta_of(t.A) == doctest::Approx(1.0 / (8 * kk * kk * kk * kk - 6 * kk * kk)).epsilon(1e-12));
    const auto c = zero_capacity_certificate(t.A);
    REQUIRE(c.has_value());
    CHECK(verify_certificate(tensor_square(t.A), *c));
    CHECK(matrix_capacity(t.A).value == 0.0);
  }
  const auto t2 = tight_example(2);
  CHECK(t2.A.m() == 3);
  CHECK(t2.A.n() == 5);
  CHECK(delta_of(t2.A) == doctest::Approx(1.0 / 104.0));
  CHECK_THROWS(tight_example(0));
}

TEST_CASE("bounds bracket the capacity") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CounterRng rng(seed);
    const auto a = random_nonneg(3, 4, rng, 0.0, 1.0, 0.2);
    const auto r = matrix_capacity(a);
    CHECK(r.lower <= r.value * (1 + 1e-9) + 1e-12);
    CHECK(r.value <= r.upper * (1 + 1e-9));
    CHECK(r.upper <= size_of(a) * (1 + 1e-12));
  }
  CHECK(balance_lower_bound(2.0, 0.0, 2, 3) == 2.0);
  CHECK(balance_lower_bound(2.0, 1.0, 2, 3) == 0.0);
  CHECK(balance_lower_bound(5.0, 0.02, 2, 4) == doctest::Approx(5.0 - 4 * 0.1));
}

TEST_CASE("pseudorandom lower bound") {
  const NonNegMatrixd flat(Eigen::MatrixXd::Constant(3, 4, 0.25));
  CHECK(pseudorandom_alpha(flat, 1e-9) == 0.25);
  const auto lb = pseudorandom_lower_bound(flat);
  REQUIRE(lb.has_value());
  CHECK(*lb == doctest::Approx(3.0));
  // wrong size: hypotheses fail
  CHECK_FALSE(pseudorandom_lower_bound(NonNegMatrixd(Eigen::MatrixXd::Constant(3, 4, 0.5))).has_value());
}

TEST_CASE("frame capacity") {
  for (Index d : {2, 3, 4}) {
    const auto h = harmonic_frame(d, 7);
    const auto r = frame_capacity(h);
    CHECK(r.converged);
    CHECK(r.method == CapacityMethod::convex_descent);
    CHECK(std::abs(r.value - double(d)) <= 1e-6);
  }
  // vectors on a line: the frame operator is singular
  Eigen::MatrixXd v(2, 3);
  v << 1, 2, -1, 0, 0, 0;
  const auto z = frame_capacity(Framed(v));
  CHECK(z.value == 0.0);
  CHECK(z.method == CapacityMethod::zero_detected);
}

TEST_CASE("frame capacity equals operator capacity of the embedding") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CounterRng rng(seed);
    const Framed f(gaussian_matrix(3, 7, rng));
    const auto fc = frame_capacity(f);
    CHECK(fc.converged);
    const auto oc = operator_capacity(frame_to_operator(f));
    CHECK(oc.method == CapacityMethod::scaling_based);
    CHECK(fc.value == doctest::Approx(oc.value).epsilon(1e-9));
    CHECK(fc.lower <= fc.value * (1 + 1e-12));
    CHECK(fc.value <= fc.upper * (1 + 1e-12));
  }
}

TEST_CASE("operator capacity") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CounterRng rng(seed);
    const auto u = random_operator(3, 3, 2, rng);
    const auto r = operator_capacity(u);
    CHECK(r.converged);
    CHECK(r.lower <= r.value * (1 + 1e-9));
    CHECK(r.value <= r.upper * (1 + 1e-9));
    // every positive definite X gives an upper bound
    for (int t = 0; t < 5; ++t) {
      const Eigen::MatrixXd g = gaussian_matrix(3, 5, rng);
      CHECK(operator_capacity_objective(u, Eigen::MatrixXd(g * g.transpose())) >= r.value * (1 - 1e-9));
    }
    CHECK(operator_capacity_objective(u, Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))) ==
          doctest::Approx(r.upper).epsilon(1e-9));
  }
  // rank-deficient left Gram
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 1;
  const auto z = operator_capacity(OperatorTupled({a}));
  CHECK(z.value == 0.0);
}

TEST_CASE("operator to matrix reduction") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CounterRng rng(seed);
    const auto u = random_operator(3, 4, 2, rng);
    const auto a = reduce_operator_to_matrix(u);
    CHECK(a.m() == 3);
    CHECK(a.n() == 4);
    CHECK(size_of(a) == doctest::Approx(size_of(u)).epsilon(1e-12));
    CHECK(matrix_capacity(a).value >= operator_capacity(u).value * (1 - 1e-8));
  }
  CounterRng rng(1);
  const auto u = random_operator(2, 2, 2, rng);
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 0, 1;
  CHECK_THROWS_AS(reduce_operator_to_matrix(u, x), std::invalid_argument);
  CHECK_THROWS_AS(reduce_operator_to_matrix(u, Eigen::MatrixXd(-Eigen::MatrixXd::Identity(2, 2))),
                  std::invalid_argument);
}
