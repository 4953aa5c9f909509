#ifndef FRAMEFLOW_INVARIANTS_HPP_
#define FRAMEFLOW_INVARIANTS_HPP_

#include "frameflow/dynamics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace frameflow {

struct InvariantResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;  // the identity with the measured values
};

/// Dynamics monitors on recorded samples: s and Delta nonincreasing,
/// FD(s) = -2 Delta within 1e-5 max(1, Delta), FD(Delta) = dDelta/dt within 1e-4 max(1, Delta).
std::vector<InvariantResult> validate_trace(const std::vector<TrajectorySample<double>>& samples,
                                            const std::string& label);

/// Every invariant of every module on seeded random instances. `determinism`
/// reruns a command and compares the serialized bytes; it may be empty.
std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed,
                                                 const std::function<std::string()>& determinism);

}  // namespace frameflow

#endif  // FRAMEFLOW_INVARIANTS_HPP_
