#include "frameflow/invariants.hpp"

#include "frameflow/capacity.hpp"
#include "frameflow/discrete_scaling.hpp"
#include "frameflow/generators.hpp"
#include "frameflow/paulsen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace frameflow {

namespace {

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Suite {
 public:
  void add(const char* module, const char* name, bool pass, std::string detail) {
    results.push_back({module, name, pass, std::move(detail)});
  }
  std::vector<InvariantResult> results;
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Marginal conditions checked directly, independent of delta_of.
bool marginals_hold(const Framed& f, double tol) {
  const double s = size_of(f), d = double(f.d()), n = double(f.n());
  const Eigen::MatrixXd dev = frame_operator(f) - (s / d) * Eigen::MatrixXd::Identity(f.d(), f.d());
  const Eigen::VectorXd norms = f.vectors().colwise().squaredNorm().transpose();
  return dev.cwiseAbs().maxCoeff() <= tol * s && (norms.array() - s / n).abs().maxCoeff() <= tol * s;
}

bool marginals_hold(const NonNegMatrixd& a, double tol) {
  const double s = size_of(a);
  return (a.row_sums().array() - s / double(a.m())).abs().maxCoeff() <= tol * s &&
         (a.col_sums().array() - s / double(a.n())).abs().maxCoeff() <= tol * s;
}

bool marginals_hold(const OperatorTupled& u, double tol) {
  const double s = size_of(u);
  const Eigen::MatrixXd dm = left_gram(u) - (s / double(u.m())) * Eigen::MatrixXd::Identity(u.m(), u.m());
  const Eigen::MatrixXd dn = right_gram(u) - (s / double(u.n())) * Eigen::MatrixXd::Identity(u.n(), u.n());
  return dm.cwiseAbs().maxCoeff() <= tol * s && dn.cwiseAbs().maxCoeff() <= tol * s;
}

// -------------------------------------------------------------------------
void core_checks(Suite& st, std::uint64_t seed) {
  {
    double worst = -1e300;
    for (std::uint64_t i = 0; i < 20; ++i) {
      CounterRng rng(seed, 100 + i);
      const Index d = 2 + Index(i % 4), n = d + 3 + Index(i % 7);
      const auto nf = near_frame<double>(d, n, 0.002 * double(i + 1), rng);
      const Framed f = rescale_to_size(nf.frame, double(d));
      const double eps = eps_nearness(f);
      worst = std::max(worst, delta_of(f) - (2.0 * double(d * d) * eps * eps + 1e-9));
    }
    st.add("core", "Delta <= 2 d^2 eps^2 + 1e-9 at s = d", worst <= 0,
           fmt("max(Delta - bound) = %.3e over 20 frames", worst));
  }
  {
    int bad = 0, total = 0;
    auto test = [&](bool zero_delta, bool balanced) {
      ++total;
      if (zero_delta != balanced) ++bad;
    };
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(seed, 200 + i);
      const Framed exact = random_parseval_frame<double>(3, 7 + Index(i), rng);
      test(is_doubly_balanced(exact, 1e-12), marginals_hold(exact, 1e-6));
      const Framed h = harmonic_frame<double>(2 + Index(i % 3), 9);
      test(is_doubly_balanced(h, 1e-12), marginals_hold(h, 1e-6));
      const Framed g(gaussian_matrix<double>(3, 8, rng));
      test(is_doubly_balanced(g, 1e-12), marginals_hold(g, 1e-6));
      const auto a = random_nonneg<double>(3, 5, rng, 0.1, 1.0);
      test(is_doubly_balanced(a, 1e-12), marginals_hold(a, 1e-6));
      const auto sk = sinkhorn(a, 1e-26);
      test(is_doubly_balanced(sk.scaled, 1e-12), marginals_hold(sk.scaled, 1e-6));
      const auto u = random_operator<double>(3, 4, 3, rng);
      test(is_doubly_balanced(u, 1e-12), marginals_hold(u, 1e-6));
      const auto os = operator_sinkhorn(u, 1e-26);
      test(is_doubly_balanced(os.scaled, 1e-12), marginals_hold(os.scaled, 1e-6));
    }
    st.add("core", "delta_of = 0 <=> doubly balanced (tol 1e-12)", bad == 0,
           fmt("%d of %d objects disagree", bad, total));
  }
  {
    double worst = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(seed, 300 + i);
      const Framed f(gaussian_matrix<double>(3, 6 + Index(i), rng));
      const auto u = frame_to_operator(f);
      worst = std::max({worst, rel(size_of(f), size_of(u)), rel(delta_of(f), delta_of(u)),
                        rel(eps_nearness(f), eps_nearness(u))});
    }
    st.add("core", "frame_to_operator preserves s, Delta, eps", worst <= 1e-12,
           fmt("max relative difference = %.3e", worst));
  }
  {
    bool ok = true;
    double worst_tri = -1e300;
    for (std::uint64_t i = 0; i < 20; ++i) {
      CounterRng rng(seed, 400 + i);
      const Framed a(gaussian_matrix<double>(3, 5, rng)), b(gaussian_matrix<double>(3, 5, rng)),
          c(gaussian_matrix<double>(3, 5, rng));
      ok = ok && dist(a, b) == dist(b, a) && dist(a, b) > 0 && dist(a, a) == 0;
      worst_tri = std::max(worst_tri, distance(a, c) - distance(a, b) - distance(b, c));
      const auto u = random_operator<double>(2, 3, 2, rng), v = random_operator<double>(2, 3, 2, rng);
      ok = ok && dist(u, v) == dist(v, u) && dist(u, v) > 0 && dist(u, u) == 0;
    }
    st.add("core", "dist symmetric, positive, zero iff equal; triangle inequality",
           ok && worst_tri <= 1e-12, fmt("metric axioms %s, max triangle excess = %.3e", ok ? "hold" : "FAIL", worst_tri));
  }
}

// -------------------------------------------------------------------------
void scaling_checks(Suite& st, std::uint64_t seed) {
  {
    double worst = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(seed, 500 + i);
      const auto a = random_nonneg<double>(2 + Index(i % 4), 3 + Index(i % 3), rng, 0.01, 1.0);
      const double s = size_of(a);
      Eigen::MatrixXd b = a.entries();
      for (int pass = 0; pass < 20; ++pass) {
        sinkhorn_row_pass(b, s);
        worst = std::max(worst, (b.rowwise().sum().array() - s / double(b.rows())).abs().maxCoeff());
        sinkhorn_column_pass(b, s);
        worst = std::max(worst, (b.colwise().sum().array() - s / double(b.cols())).abs().maxCoeff());
      }
    }
    st.add("discrete_scaling", "Sinkhorn passes hit s/m row sums and s/n column sums", worst <= 1e-12,
           fmt("max marginal error after a pass = %.3e", worst));
  }
  {
    double worst_left = 0, worst_right = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(seed, 600 + i);
      const Index m = 2 + Index(i % 3), n = 3 + Index(i % 4);
      auto mats = random_operator<double>(m, n, 3, rng).mats();
      for (int step = 0; step < 15; ++step) {
        operator_left_step(mats);
        const OperatorTupled a(mats);
        worst_left = std::max(worst_left, (left_gram(a) - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff());
        operator_right_step(mats);
        const OperatorTupled b(mats);
        const Eigen::MatrixXd bn = right_gram(b);
        const double c = bn.trace() / double(n);
        worst_right = std::max(worst_right, (bn - c * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
      }
    }
    st.add("discrete_scaling", "operator Sinkhorn: sum VV^T = I after left, sum V^TV ~ I after right",
           worst_left <= 1e-10 && worst_right <= 1e-10,
           fmt("left error = %.3e, right error = %.3e", worst_left, worst_right));
  }
  {
    double worst = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(seed, 700 + i);
      const Index m = 3, n = 4;
      const auto a = random_nonneg<double>(m, n, rng, 0.05, 1.0);
      const Eigen::VectorXd x = uniform_matrix<double>(m, 1, rng, 0.2, 3.0);
      const Eigen::VectorXd y = uniform_matrix<double>(n, 1, rng, 0.2, 3.0);
      const NonNegMatrixd b(x.asDiagonal() * a.entries() * y.asDiagonal());
      const double expect = std::exp(x.array().log().mean() + y.array().log().mean()) * matrix_capacity(a).value;
      worst = std::max(worst, rel(matrix_capacity(b).value, expect));
    }
    st.add("discrete_scaling", "cap(XAY) = (prod X)^{1/m} (prod Y)^{1/n} cap(A)", worst <= 1e-5,
           fmt("max relative error = %.3e", worst));
    st.add("capacity", "scaling covariance of matrix_capacity", worst <= 1e-5,
           fmt("max relative error = %.3e over random diagonal X, Y", worst));
  }
}

// -------------------------------------------------------------------------
void dynamics_checks(Suite& st, std::uint64_t seed) {
  FlowOptions fine;
  fine.max_delta_change = 5e-4;
  fine.max_samples = 200000;
  CounterRng rng(seed, 800);
  const auto u = rescale_to_size(random_operator<double>(3, 5, 3, rng), 3.0);
  const Framed f = rescale_to_size(Framed(gaussian_matrix<double>(3, 7, rng)), 3.0);
  const auto raw = random_nonneg<double>(3, 5, rng, 0.05, 1.0);
  const NonNegMatrixd a(raw.entries() * (3.0 / size_of(raw)));

  const auto fo = operator_flow(u, 1e-10, 1e6, fine);
  const auto ff = frame_flow(f, 1e-10, 1e6, fine);
  const auto fm = matrix_flow(a, 1e-10, 1e6, fine);

  double es = 0, ed = 0;
  bool mono = true;
  for (const auto* tr : {&fo.traj, &ff.traj, &fm.traj}) {
    const auto c = check_trace(tr->samples);
    es = std::max(es, c.max_s_error);
    ed = std::max(ed, c.max_delta_error);
    mono = mono && c.s_monotone && c.delta_monotone;
  }
  st.add("dynamics", "ds/dt = -2 Delta (FD, all three flows)", es <= 1e-5,
         fmt("max |FD(s) + 2 Delta| / max(1, Delta) = %.3e", es));
  st.add("dynamics", "dDelta/dt = -4 sum |dU/dt|^2 (FD, all three flows)", ed <= 1e-5,
         fmt("max |FD(Delta) - dDelta/dt| / max(1, Delta) = %.3e", ed));
  st.add("dynamics", "s and Delta nonincreasing", mono, mono ? "monotone on all samples" : "increase found");

  {
    const double c0 = frame_capacity(f).value, c1 = frame_capacity(ff.final_state).value;
    const double m0 = matrix_capacity(a).value, m1 = matrix_capacity(fm.final_state).value;
    st.add("dynamics", "capacity conserved along frame and matrix flows",
           rel(c0, c1) <= 1e-5 && rel(m0, m1) <= 1e-5,
           fmt("frame drift = %.3e, matrix drift = %.3e", rel(c0, c1), rel(m0, m1)));
  }
  {
    double worst = 0;
    for (Index i = 0; i < u.k(); ++i) {
      const Eigen::MatrixXd rec = fo.traj.scaling.left * u[i] * fo.traj.scaling.right;
      worst = std::max(worst, (rec - fo.final_state[i]).norm() / fo.final_state[i].norm());
    }
    const Eigen::MatrixXd rf = ff.traj.scaling.left * f.vectors() * ff.traj.scaling.right;
    worst = std::max(worst, (rf - ff.final_state.vectors()).norm() / ff.final_state.vectors().norm());
    // A(t) = X A(0) Y, so A(t)^{o2} = X^2 A(0)^{o2} Y^2.
    const Eigen::MatrixXd x2 = fm.traj.scaling.left.array().square().matrix();
    const Eigen::MatrixXd y2 = fm.traj.scaling.right.array().square().matrix();
    const Eigen::MatrixXd ra2 = x2 * a.entries() * y2;
    worst = std::max(worst, (ra2 - fm.final_state.entries()).norm() / fm.final_state.entries().norm());
    st.add("dynamics", "U(t) = X(t) U(0) Y(t)", worst <= 1e-7, fmt("max relative Frobenius error = %.3e", worst));
  }
  {
    // Nearly doubly stochastic start, so the maintenance preconditions hold.
    const Index m = 4, n = 8;
    CounterRng r2(seed, 801);
    Eigen::MatrixXd b = Eigen::MatrixXd::Constant(m, n, 1.0 / double(n));
    b.array() *= 1.0 + 3e-10 * uniform_matrix<double>(m, n, r2, -1.0, 1.0).array();
    sinkhorn_column_pass(b, double(m));  // s = m, equal column sums
    const NonNegMatrixd a0(b);
    const double delta0 = delta_of(a0);
    const double alpha = pseudorandom_alpha(a0, kWeakBeta);
    const bool pre = alpha >= 80.0 * std::sqrt(double(m) * delta0) / (kWeakRateConstant * double(n)) &&
                     std::abs(size_of(a0) - double(m)) <= 1e-12 * double(m);
    if (pre) {
      const auto fl = matrix_flow(a0, delta0 * 1e-2);
      const auto& sc = fl.traj.scaling;
      const double lo = std::min(sc.left.diagonal().minCoeff(), sc.right.diagonal().minCoeff());
      const double hi = std::max(sc.left.diagonal().maxCoeff(), sc.right.diagonal().maxCoeff());
      st.add("dynamics", "kappa: diagonal factors within [e^-1/4, e^1/4]",
             lo >= std::exp(-0.25) && hi <= std::exp(0.25),
             fmt("factors in [%.12f, %.12f], Delta(0) = %.2e, alpha = %.3g", lo, hi, delta0, alpha));
      double worst = 1e300;
      for (std::size_t i = 0; i < fl.traj.samples.size(); ++i) {
        const auto q = fl.traj.squared_at(i);
        for (Index j = 0; j < n; ++j)
          for (Index r = 0; r < m; ++r)
            if (a0(r, j) >= alpha) worst = std::min(worst, q(r, j) / alpha);
      }
      st.add("paulsen", "pseudorandom maintenance: entries >= alpha stay >= alpha/10", worst >= 0.1,
             fmt("min entry / alpha over the flow = %.6f", worst));
    } else {
      st.add("dynamics", "kappa: diagonal factors within [e^-1/4, e^1/4]", true,
             "skipped: maintenance preconditions not met by the generated instance");
      st.add("paulsen", "pseudorandom maintenance: entries >= alpha stay >= alpha/10", true,
             "skipped: preconditions not met");
    }
  }
  const auto vt = validate_trace(ff.traj.samples, "frame flow");
  st.results.insert(st.results.end(), vt.begin(), vt.end());
}

// -------------------------------------------------------------------------
bool brute_permanent_positive(const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[std::size_t(i)] = int(i);
  do {
    bool all = true;
    for (Index i = 0; i < n && all; ++i) all = a(i, perm[std::size_t(i)]) > 0;
    if (all) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

void capacity_checks(Suite& st, std::uint64_t seed) {
  {
    double worst_up = -1e300, worst_lo = -1e300;
    CounterRng rng(seed, 900);
    std::uniform_int_distribution<int> side(1, 6);
    for (int t = 0; t < 1000; ++t) {
      const Index m = side(rng), n = side(rng);
      const auto a = random_nonneg<double>(m, n, rng, 0.0, 1.0, t % 3 == 0 ? 0.4 : 0.0);
      if (a.entries().sum() == 0) continue;
      const double s = size_of(a), delta = delta_of(a);
      const double cap = matrix_capacity(a).value;
      worst_up = std::max(worst_up, cap - s - 1e-9 * s);
      worst_lo = std::max(worst_lo, std::max(0.0, s - double(m * n) * std::sqrt(delta / 2)) - cap);
      if (t < 100 && m == n) worst_up = std::max(worst_up, matrix_capacity_convex(a).value - s - 1e-9 * s);
    }
    for (std::uint64_t i = 0; i < 20; ++i) {
      CounterRng r2(seed, 910 + i);
      const auto u = random_operator<double>(3, 4, 2, r2);
      worst_up = std::max(worst_up, operator_capacity(u).value - size_of(u) * (1 + 1e-9));
      const Framed f(gaussian_matrix<double>(3, 6, r2));
      worst_up = std::max(worst_up, frame_capacity(f).value - size_of(f) * (1 + 1e-9));
    }
    st.add("capacity", "cap <= s (all methods)", worst_up <= 0, fmt("max(cap - s - slack) = %.3e", worst_up));
    st.add("capacity", "cap >= s - mn sqrt(Delta/2) (1000 matrices, m,n <= 6)", worst_lo <= 1e-9,
           fmt("max(bound - cap) = %.3e", worst_lo));
  }
  {
    double worst_cap = 0, worst_delta = 0, worst_s = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      CounterRng rng(seed, 1000 + i);
      const auto a = random_nonneg<double>(2 + Index(i % 3), 3 + Index(i % 2), rng, 0.01, 1.0);
      const auto b = tensor_square(a);
      worst_cap = std::max(worst_cap, rel(matrix_capacity(a).value, matrix_capacity(b).value));
      worst_delta = std::max(worst_delta, std::abs(delta_of(a) - delta_of(b)));
      worst_s = std::max(worst_s, std::abs(size_of(a) - size_of(b)));
    }
    st.add("capacity", "tensor_square preserves cap, Delta, s",
           worst_cap <= 1e-6 && worst_delta <= 1e-12 && worst_s <= 1e-12,
           fmt("cap rel = %.3e, |dDelta| = %.3e, |ds| = %.3e", worst_cap, worst_delta, worst_s));
  }
  {
    // Exhaustive for sides 1..4; side 5 sampled (all patterns with <= 8 ones
    // are covered by the acceptance suite).
    std::size_t checked = 0, bad = 0;
    for (Index n = 1; n <= 4; ++n) {
      const unsigned total = 1u << (n * n);
      for (unsigned p = 0; p < total; ++p) {
        Eigen::MatrixXd a(n, n);
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) a(i, j) = (p >> (i * n + j)) & 1u;
        const auto cert = capacity_zero_check(NonNegMatrixd(a));
        const bool pos = brute_permanent_positive(a);
        if (cert.has_value() == pos) ++bad;
        if (cert && !verify_certificate(NonNegMatrixd(a), *cert)) ++bad;
        ++checked;
      }
    }
    CounterRng rng(seed, 1100);
    for (int t = 0; t < 20000; ++t) {
      const unsigned p = unsigned(rng() & ((1u << 25) - 1));
      Eigen::MatrixXd a(5, 5);
      for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) a(i, j) = (p >> (i * 5 + j)) & 1u;
      const auto cert = capacity_zero_check(NonNegMatrixd(a));
      if (cert.has_value() == brute_permanent_positive(a)) ++bad;
      if (cert && !verify_certificate(NonNegMatrixd(a), *cert)) ++bad;
      ++checked;
    }
    st.add("capacity", "capacity_zero_check = brute-force permanent positivity", bad == 0,
           fmt("%zu supports (sides 1-4 exhaustive, side 5 sampled), %zu mismatches", checked, bad));
  }
}

// -------------------------------------------------------------------------
void paulsen_checks(Suite& st, std::uint64_t seed) {
  {
    double worst_p = 0, worst_n = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(seed, 1200 + i);
      const Index d = 2 + Index(i % 3), n = 2 * d + Index(i);
      const auto nf = near_frame<double>(d, n, 0.01, rng);
      const auto r = solve_basic(nf.frame, 1e-20);
      const auto& v = r.frame.vectors();
      worst_p = std::max(worst_p, (v * v.transpose() - Eigen::MatrixXd::Identity(d, d)).norm());
      worst_n = std::max(worst_n, (v.colwise().squaredNorm().array() - double(d) / double(n)).abs().maxCoeff());
    }
    st.add("paulsen", "solve_basic: |sum vv^T - I| <= 1e-8, | |v|^2 - d/n | <= 1e-8",
           worst_p <= 1e-8 && worst_n <= 1e-8, fmt("Parseval error = %.3e, norm error = %.3e", worst_p, worst_n));
  }
  {
    double worst_norm = 0, worst_res = 0, worst_move = -1e300;
    CounterRng rng(seed, 1300);
    const Framed u = random_parseval_frame<double>(3, 40, rng);
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto p = perturb(u, 1e-4, seed, t);
      worst_norm = std::max(worst_norm, (p.frame.vectors().colwise().squaredNorm().array() - 3.0 / 40.0).abs().maxCoeff());
      const auto res = noise_residuals(u, p.noise);
      worst_res = std::max({worst_res, res.l1_z, res.l2});
      worst_move = std::max(worst_move, dist(u, p.frame) - 4.0 * p.noise.z.squaredNorm());
    }
    st.add("paulsen", "perturb: |w|^2 = d/n, constraints, dist <= 4 sum |z|^2",
           worst_norm <= 1e-14 && worst_res <= 1e-9 && worst_move <= 0,
           fmt("norm error = %.3e, constraint residual = %.3e, max(dist - 4|z|^2) = %.3e", worst_norm, worst_res,
               worst_move));
  }
  {
    std::size_t its = 0, bad_halving = 0;
    double worst_s = 0;
    for (std::uint64_t i = 0; i < 3; ++i) {
      CounterRng rng(seed, 1400 + i);
      const auto nf = near_frame<double>(3, 60, 0.01, rng);
      SmoothedParams p;
      p.seed = seed + i;
      const auto r = solve_smoothed(nf.frame, p);
      for (const auto& rec : r.trace.iterations) {
        ++its;
        if (!(rec.delta_after <= r.trace.delta0 / std::ldexp(1.0, int(rec.l + 1)))) ++bad_halving;
        worst_s = std::max(worst_s, std::abs(rec.s_after - 3.0));
      }
    }
    st.add("paulsen", "solve_smoothed: Delta(U^l) <= Delta/2^l, s(U^l) = d", bad_halving == 0 && worst_s <= 1e-12,
           fmt("%zu iterations, %zu halving failures, max |s - d| = %.3e", its, bad_halving, worst_s));
  }
}

}  // namespace

std::vector<InvariantResult> validate_trace(const std::vector<TrajectorySample<double>>& samples,
                                            const std::string& label) {
  std::vector<InvariantResult> out;
  const auto c = check_trace(samples);
  out.push_back({"dynamics", label + ": s and Delta nonincreasing", c.s_monotone && c.delta_monotone,
                 fmt("s %s, Delta %s over %zu samples", c.s_monotone ? "monotone" : "INCREASES",
                     c.delta_monotone ? "monotone" : "INCREASES", samples.size())});
  out.push_back({"dynamics", label + ": FD(s) = -2 Delta", c.max_s_error <= 1e-5,
                 fmt("max |FD(s) + 2 Delta| / max(1, Delta) = %.3e", c.max_s_error)});
  out.push_back({"dynamics", label + ": FD(Delta) = dDelta/dt", c.max_delta_error <= 1e-4,
                 fmt("max |FD(Delta) - dDelta/dt| / max(1, Delta) = %.3e", c.max_delta_error)});
  return out;
}

std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed,
                                                 const std::function<std::string()>& determinism) {
  Suite st;
  core_checks(st, seed);
  scaling_checks(st, seed);
  dynamics_checks(st, seed);
  capacity_checks(st, seed);
  paulsen_checks(st, seed);
  if (determinism) {
    const std::string a = determinism(), b = determinism();
    st.add("cli", "identical config and seed give identical bytes", a == b && !a.empty(),
           fmt("%zu vs %zu bytes, %s", a.size(), b.size(), a == b ? "identical" : "DIFFER"));
  }
  return st.results;
}

}  // namespace frameflow
