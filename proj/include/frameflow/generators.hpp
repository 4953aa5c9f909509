#ifndef FRAMEFLOW_GENERATORS_HPP_
#define FRAMEFLOW_GENERATORS_HPP_

#include "frameflow/discrete_scaling.hpp"
#include "frameflow/random.hpp"

#include <cstdint>

namespace frameflow {

template <typename Scalar>
struct NearFrame {
  Frame<Scalar> frame;
  Frame<Scalar> exact;  // the equal-norm Parseval frame before noise
  Scalar requested_eps = 0;
  Scalar achieved_eps = 0;
  int attempts = 0;
};

/// Equal-norm Parseval frame from Gaussian vectors via alternating scaling.
/// Degenerate draws are retried, at most 10 times.
template <typename Scalar = double>
Frame<Scalar> random_parseval_frame(Index d, Index n, CounterRng& rng, int* attempts = nullptr) {
  if (d < 1 || n < d) throw std::invalid_argument("random_parseval_frame: need 1 <= d <= n");
  for (int a = 1; a <= 10; ++a) {
    if (attempts) *attempts = a;
    const Frame<Scalar> g(gaussian_matrix<Scalar>(d, n, rng));
    try {
      auto r = frame_alternating(g, Scalar(1e-28), 20000);
      if (r.report.converged || r.report.final_delta < 1e-24) return std::move(r.scaled);
    } catch (const DegenerateInput&) {
    }
  }
  throw DegenerateInput("random_parseval_frame: 10 degenerate samples");
}

/// Exact frame plus a fixed Gaussian direction, scaled by bisection so the
/// measured eps_nearness is close to eps.
template <typename Scalar = double>
NearFrame<Scalar> near_frame(Index d, Index n, Scalar eps, CounterRng& rng) {
  if (eps < Scalar(0)) throw std::invalid_argument("near_frame: eps must be nonnegative");
  NearFrame<Scalar> out;
  out.requested_eps = eps;
  out.exact = random_parseval_frame<Scalar>(d, n, rng, &out.attempts);
  out.frame = out.exact;
  if (eps > Scalar(0)) {
    const MatrixX<Scalar> dir = gaussian_matrix<Scalar>(d, n, rng) / std::sqrt(Scalar(n));
    auto eps_at = [&](Scalar t) { return eps_nearness(Frame<Scalar>(out.exact.vectors() + t * dir)); };
    Scalar lo = 0, hi = eps;
    for (int i = 0; i < 200 && eps_at(hi) < eps; ++i) hi *= 2;
    for (int i = 0; i < 100; ++i) {
      const Scalar mid = (lo + hi) / 2;
      (eps_at(mid) < eps ? lo : hi) = mid;
      if (hi - lo <= Scalar(1e-6) * hi) break;
    }
    out.frame = Frame<Scalar>(out.exact.vectors() + hi * dir);
  }
  out.achieved_eps = eps_nearness(out.frame);
  return out;
}

template <typename Scalar = double>
OperatorTuple<Scalar> random_operator(Index m, Index n, Index k, CounterRng& rng) {
  std::vector<MatrixX<Scalar>> mats;
  for (Index i = 0; i < k; ++i) mats.push_back(gaussian_matrix<Scalar>(m, n, rng));
  return OperatorTuple<Scalar>(std::move(mats));
}

/// Uniform entries in [lo, hi); each entry is zeroed with probability zero_prob.
template <typename Scalar = double>
NonNegMatrix<Scalar> random_nonneg(Index m, Index n, CounterRng& rng, Scalar lo = 0, Scalar hi = 1,
                                   double zero_prob = 0.0) {
  MatrixX<Scalar> a = uniform_matrix<Scalar>(m, n, rng, lo, hi);
  if (zero_prob > 0) {
    const MatrixX<Scalar> mask = uniform_matrix<Scalar>(m, n, rng, 0, 1);
    a = (mask.array() < Scalar(zero_prob)).select(Scalar(0), a);
  }
  return NonNegMatrix<Scalar>(std::move(a));
}

}  // namespace frameflow

#endif  // FRAMEFLOW_GENERATORS_HPP_
