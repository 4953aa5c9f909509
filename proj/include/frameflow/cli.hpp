#ifndef FRAMEFLOW_CLI_HPP_
#define FRAMEFLOW_CLI_HPP_

#include "frameflow/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace frameflow::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kInvariant = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  long long d = 3, n = 12, m = 4, k = 2;
  std::string kind = "frame";
  std::optional<int> tight;  // gen/flow/capacity: tight example index
  double eps = 0.01;
  double sigma2 = 1e-5;
  double tol = 0;            // target Delta or capacity tolerance; 0 picks the command default
  double max_change = 0.002; // flow: per-step relative Delta change, sets trace resolution
  long long trials = 1;
  bool demo = false;
  bool basic = false, smoothed = false;
  std::string in, out, trace, config;

  void validate() const;
};

/// Number of worker threads: FRAMEFLOW_THREADS when set, else the hardware count.
unsigned worker_count();

io::ordered_json cmd_gen(const RunConfig& c);
io::ordered_json cmd_flow(const RunConfig& c, std::string* trace_csv = nullptr);
io::ordered_json cmd_solve(const RunConfig& c);
io::ordered_json cmd_capacity(const RunConfig& c);
io::ordered_json cmd_perturb(const RunConfig& c);
/// Runs the invariant suite (and validates c.trace when given). Returns the
/// report; `ok` is false on any failure.
io::ordered_json cmd_check(const RunConfig& c, bool& ok, std::ostream& log);

/// Full command line entry point; maps exceptions to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace frameflow::cli

#endif  // FRAMEFLOW_CLI_HPP_
