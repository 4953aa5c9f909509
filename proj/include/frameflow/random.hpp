#ifndef FRAMEFLOW_RANDOM_HPP_
#define FRAMEFLOW_RANDOM_HPP_

#include "frameflow/base.hpp"

#include <cstdint>
#include <limits>
#include <random>

namespace frameflow {

/// Counter-based generator: the i-th output is a SplitMix64 finalizer applied
/// to key + i * gamma, so a stream is fully determined by (seed, stream id)
/// and independent of how other streams are consumed.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

  /// Independent child stream.
  CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream + 1); }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Matrix of iid N(0, stddev^2) entries, filled column by column.
template <typename Scalar = double, typename Rng>
MatrixX<Scalar> gaussian_matrix(Index rows, Index cols, Rng& rng, Scalar stddev = Scalar(1)) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixX<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = stddev * Scalar(normal(rng));
  return m;
}

template <typename Scalar = double, typename Rng>
MatrixX<Scalar> uniform_matrix(Index rows, Index cols, Rng& rng, Scalar lo = Scalar(0),
                               Scalar hi = Scalar(1)) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  MatrixX<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = lo + (hi - lo) * Scalar(uniform(rng));
  return m;
}

}  // namespace frameflow

#endif  // FRAMEFLOW_RANDOM_HPP_
