#include "frameflow/cli.hpp"

#include "frameflow/capacity.hpp"
#include "frameflow/generators.hpp"
#include "frameflow/invariants.hpp"
#include "frameflow/paulsen.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace frameflow::cli {

using io::ordered_json;

namespace {

constexpr const char* kSchemaVersion = "1";

ordered_json header(const RunConfig& c) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = c.command;
  j["seed"] = c.seed;
  return j;
}

/// Runs fn(i) for i in [0, count) on the worker pool; results keep index order.
std::vector<ordered_json> run_trials(long long count, const std::function<ordered_json(long long)>& fn) {
  std::vector<ordered_json> results(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), unsigned(count)));
  std::atomic<long long> next{0};
  auto work = [&] {
    for (long long i = next++; i < count; i = next++) {
      try {
        results[std::size_t(i)] = fn(i);
      } catch (...) {
        errors[std::size_t(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

double tol_or(const RunConfig& c, double fallback) { return c.tol > 0 ? c.tol : fallback; }

io::Object generate(const RunConfig& c, ordered_json* meta = nullptr) {
  CounterRng rng(c.seed);
  if (c.kind == "frame") {
    const auto nf = near_frame<double>(c.d, c.n, c.eps, rng);
    if (meta) {
      (*meta)["requested_eps"] = nf.requested_eps;
      (*meta)["achieved_eps"] = nf.achieved_eps;
      (*meta)["attempts"] = nf.attempts;
    }
    return nf.frame;
  }
  if (c.kind == "operator") return random_operator<double>(c.m, c.n, c.k, rng);
  if (c.tight) {
    if (meta) (*meta)["tight_k"] = *c.tight;
    return tight_example<double>(*c.tight).A;
  }
  return random_nonneg<double>(c.m, c.n, rng, 0.0, 1.0);
}

/// Object from --in (a bare object or a gen document), else generated from flags.
io::Object load_or_generate(const RunConfig& c) {
  if (c.in.empty()) return generate(c);
  const auto doc = io::read_json_file(c.in);
  return io::object_from_json(doc.contains("object") ? doc["object"] : doc);
}

Framed require_frame(const io::Object& obj, const char* cmd) {
  if (const auto* f = std::get_if<Framed>(&obj)) return *f;
  throw UsageError(std::string(cmd) + ": input must be a frame");
}

ordered_json trace_monitors(const std::vector<TrajectorySample<double>>& smp) {
  const auto chk = check_trace(smp);
  return ordered_json{{"max_s_error", chk.max_s_error},
                      {"max_delta_error", chk.max_delta_error},
                      {"s_monotone", chk.s_monotone},
                      {"delta_monotone", chk.delta_monotone}};
}

const char* status_name(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::time_limit: return "time_limit";
    default: return "step_limit";
  }
}

}  // namespace

void RunConfig::validate() const {
  for (auto [v, name] : {std::pair{d, "d"}, {n, "n"}, {m, "m"}, {k, "k"}, {trials, "trials"}})
    if (v <= 0) throw UsageError(std::string("--") + name + " must be positive");
  if (tight && *tight < 1) throw UsageError("--tight must be positive");
  if (eps < 0) throw UsageError("--eps must be nonnegative");
  if (!(sigma2 > 0)) throw UsageError("--sigma2 must be positive");
  if (tol < 0) throw UsageError("--tol must be positive");
  if (!(max_change > 0 && max_change < 1)) throw UsageError("--max-change must be in (0, 1)");
  if (kind != "frame" && kind != "operator" && kind != "matrix")
    throw UsageError("--kind must be frame, operator or matrix");
  if (kind == "frame" && n < d) throw UsageError("frames need n >= d");
}

unsigned worker_count() {
  if (const char* env = std::getenv("FRAMEFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return unsigned(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// -------------------------------------------------------------------------
ordered_json cmd_gen(const RunConfig& c) {
  ordered_json j = header(c);
  j["kind"] = c.kind;
  ordered_json meta = ordered_json::object();
  const auto obj = generate(c, &meta);
  for (auto it = meta.begin(); it != meta.end(); ++it) j[it.key()] = it.value();
  j["object"] = io::to_json(obj);
  return j;
}

ordered_json cmd_flow(const RunConfig& c, std::string* trace_csv) {
  const auto obj = load_or_generate(c);
  FlowOptions opts;
  opts.max_delta_change = c.max_change;
  const double s0 = std::visit([](const auto& o) { return double(size_of(o)); }, obj);
  const double target = tol_or(c, 1e-12 * s0 * s0);
  ordered_json j = header(c);
  j["kind"] = io::kind_of(obj);
  j["target_delta"] = target;
  j["max_change"] = c.max_change;

  auto finish = [&](const auto& res, const auto& start) {
    const auto& tr = res.traj;
    j["s0"] = tr.front().s;
    j["delta0"] = tr.front().delta;
    j["s_final"] = tr.back().s;
    j["delta_final"] = tr.back().delta;
    j["t_final"] = tr.back().t;
    j["movement"] = tr.back().movement;
    if constexpr (!std::is_same_v<std::decay_t<decltype(start)>, NonNegMatrixd>)
      j["dist"] = dist(start, res.final_state);
    j["status"] = status_name(tr.status);
    j["accepted_steps"] = tr.accepted_steps;
    j["rejected_steps"] = tr.rejected_steps;
    j["samples"] = tr.samples.size();
    if (tr.kappa_ratio) j["kappa_ratio"] = *tr.kappa_ratio;
    j["monitors"] = trace_monitors(tr.samples);
    j["final"] = io::to_json(res.final_state);
    if (trace_csv) {
      std::ostringstream os;
      io::write_trace_csv(os, tr.samples);
      *trace_csv = os.str();
    }
  };
  if (const auto* f = std::get_if<Framed>(&obj)) {
    finish(frame_flow(*f, target, 1e6, opts), *f);
  } else if (const auto* u = std::get_if<OperatorTupled>(&obj)) {
    finish(operator_flow(*u, target, 1e6, opts), *u);
  } else {
    const auto& a = std::get<NonNegMatrixd>(obj);
    const auto res = matrix_flow(a, target, 1e6, opts);
    finish(res, a);
    // Distance on A rather than on A^{o2}.
    j["dist"] = (a.entries().cwiseSqrt() - res.final_state.entries().cwiseSqrt()).squaredNorm();
  }
  return j;
}

ordered_json cmd_solve(const RunConfig& c) {
  if (c.basic == c.smoothed) throw UsageError("solve: pass exactly one of --basic, --smoothed");
  if (!c.in.empty() && c.trials != 1) throw UsageError("solve: --in takes a single frame; use --trials 1");
  ordered_json j = header(c);
  j["mode"] = c.basic ? "basic" : "smoothed";
  j["d"] = c.d;
  j["n"] = c.n;
  j["eps"] = c.eps;
  const double final_delta = tol_or(c, c.basic ? 1e-20 : 1e-10);
  j["final_delta"] = final_delta;

  std::optional<Framed> given;
  if (!c.in.empty()) {
    given = require_frame(load_or_generate(c), "solve");
    j["d"] = given->d();
    j["n"] = given->n();
  }

  auto trial = [&](long long t) -> ordered_json {
    ordered_json r;
    r["trial"] = t;
    Framed u;
    if (given) {
      u = *given;
    } else {
      CounterRng rng(c.seed, std::uint64_t(t));
      const auto nf = near_frame<double>(c.d, c.n, c.eps, rng);
      u = nf.frame;
    }
    const double eps = eps_nearness(u);
    const double d = double(u.d()), n = double(u.n());
    r["achieved_eps"] = eps;
    r["delta_in"] = delta_of(u);
    Framed v;
    if (c.basic) {
      const auto res = solve_basic(u, final_delta);
      v = res.frame;
      r["fallback"] = res.diag.fallback;
      r["flow_time"] = res.diag.flow_time;
      r["steps"] = res.diag.steps;
      r["capacity_estimate"] = res.diag.s_flowed;
    } else {
      SmoothedParams p;
      p.demo_mode = c.demo;
      p.final_delta = final_delta;
      p.seed = c.seed * 0x9E3779B97F4A7C15ULL + std::uint64_t(t);
      const auto res = solve_smoothed(u, p);
      v = res.frame;
      r["converged"] = res.trace.converged;
      r["iterations"] = res.trace.iterations.size();
      r["path"] = io::to_json(res.trace);
    }
    const Eigen::MatrixXd& vv = v.vectors();
    const double dd = dist(u, v), bound = 100.0 * d * d * n * eps;
    r["dist"] = dd;
    r["bound"] = bound;
    r["ratio"] = bound > 0 ? dd / bound : 0.0;
    r["parseval_error"] = (vv * vv.transpose() - Eigen::MatrixXd::Identity(u.d(), u.d())).norm();
    r["norm_error"] = (vv.colwise().squaredNorm().array() - d / n).abs().maxCoeff();
    r["delta_out"] = delta_of(v);
    if (given) r["frame"] = io::to_json(v);
    return r;
  };
  const auto results = run_trials(c.trials, trial);

  double max_ratio = 0, max_p = 0, max_n = 0;
  long long converged = 0;
  for (const auto& r : results) {
    max_ratio = std::max(max_ratio, r["ratio"].get<double>());
    max_p = std::max(max_p, r["parseval_error"].get<double>());
    max_n = std::max(max_n, r["norm_error"].get<double>());
    if (!r.contains("converged") || r["converged"].get<bool>()) ++converged;
  }
  j["summary"] = {{"trials", c.trials},
                  {"max_ratio", max_ratio},
                  {"within_bound", max_ratio <= 1.0},
                  {"max_parseval_error", max_p},
                  {"max_norm_error", max_n},
                  {"converged", converged}};
  j["trials"] = results;
  return j;
}

ordered_json cmd_capacity(const RunConfig& c) {
  const auto obj = load_or_generate(c);
  const double tol = tol_or(c, 1e-12);
  ordered_json j = header(c);
  j["kind"] = io::kind_of(obj);
  CapacityResult<double> res;
  if (const auto* f = std::get_if<Framed>(&obj)) {
    j["s"] = size_of(*f);
    j["delta"] = delta_of(*f);
    res = frame_capacity(*f, std::max(tol, 1e-10));
  } else if (const auto* u = std::get_if<OperatorTupled>(&obj)) {
    j["s"] = size_of(*u);
    j["delta"] = delta_of(*u);
    res = operator_capacity(*u, tol);
  } else {
    const auto& a = std::get<NonNegMatrixd>(obj);
    j["s"] = size_of(a);
    j["delta"] = delta_of(a);
    res = matrix_capacity(a, tol);
  }
  j["capacity"] = io::to_json(res);
  return j;
}

ordered_json cmd_perturb(const RunConfig& c) {
  Framed u;
  if (c.in.empty()) {
    CounterRng rng(c.seed);
    u = random_parseval_frame<double>(c.d, c.n, rng);
  } else {
    u = require_frame(load_or_generate(c), "perturb");
  }
  const Framed eq = equalize_norms(u);
  const double d = double(eq.d()), n = double(eq.n());
  ordered_json j = header(c);
  j["d"] = eq.d();
  j["n"] = eq.n();
  j["sigma2"] = c.sigma2;
  j["equalized"] = dist(u, eq) > 0;
  j["delta_u"] = delta_of(eq);

  const auto results = run_trials(c.trials, [&](long long t) {
    const auto p = perturb(eq, c.sigma2, c.seed, std::uint64_t(t));
    const auto res = noise_residuals(eq, p.noise);
    return ordered_json{{"trial", t},
                        {"dist", dist(eq, p.frame)},
                        {"delta_w", delta_of(p.frame)},
                        {"l1_y", res.l1_y},
                        {"l1_z", res.l1_z},
                        {"l2", res.l2},
                        {"constraint_rank", p.noise.constraint_rank}};
  });
  double mean_dist = 0, mean_dw = 0, worst = 0;
  for (const auto& r : results) {
    mean_dist += r["dist"].get<double>() / double(c.trials);
    mean_dw += r["delta_w"].get<double>() / double(c.trials);
    worst = std::max({worst, r["l1_z"].get<double>(), r["l2"].get<double>()});
  }
  j["summary"] = {{"mean_dist", mean_dist},
                  {"movement_scale", 2.0 * c.sigma2 * d * n},
                  {"mean_delta_w", mean_dw},
                  {"max_constraint_residual", worst}};
  j["trials"] = results;
  return j;
}

ordered_json cmd_check(const RunConfig& c, bool& ok, std::ostream& log) {
  std::vector<InvariantResult> results;
  if (!c.trace.empty()) {
    std::ifstream in(c.trace);
    if (!in) throw std::ios_base::failure("cannot open " + c.trace);
    const auto samples = io::read_trace_csv(in);
    results = validate_trace(samples, "trace " + c.trace);
  }
  if (c.trace.empty()) {
    RunConfig small;
    small.command = "solve";
    small.basic = true;
    small.seed = c.seed;
    small.trials = 3;
    const auto suite = run_invariant_suite(c.seed, [small] { return cmd_solve(small).dump(2); });
    results.insert(results.end(), suite.begin(), suite.end());
  }
  ok = true;
  ordered_json j = header(c);
  ordered_json list = ordered_json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    log << (r.passed ? "PASS  " : "FAIL  ") << r.module << ": " << r.name << "  [" << r.detail << "]\n";
    list.push_back({{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  j["passed"] = ok;
  j["results"] = std::move(list);
  return j;
}

// -------------------------------------------------------------------------
namespace {

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--d", c.d, "frame dimension");
  sub->add_option("--n", c.n, "number of vectors / columns");
  sub->add_option("--m", c.m, "rows (operator, matrix)");
  sub->add_option("--k", c.k, "number of operator matrices");
  sub->add_option("--kind", c.kind, "frame, operator or matrix");
  sub->add_option("--tight", c.tight, "matrix kind: emit the tight example with this k");
  sub->add_option("--eps", c.eps, "requested eps-nearness of generated frames");
  sub->add_option("--sigma2", c.sigma2, "perturbation variance");
  sub->add_option("--tol", c.tol, "target Delta or capacity tolerance");
  sub->add_option("--max-change", c.max_change, "flow: max relative Delta change per step");
  sub->add_option("--trials", c.trials, "number of trials");
  sub->add_flag("--demo", c.demo, "smoothed solve: demo constants zeta = 0.1, kappa = 1e-3");
  sub->add_option("--in", c.in, "input JSON object");
  sub->add_option("--out", c.out, "output JSON path (default stdout)");
  sub->add_option("--trace", c.trace, "flow: write the CSV trace here; check: validate this trace");
  sub->add_option("--config", c.config, "JSON config; command line flags take precedence");
}

/// Fills options not given on the command line from the JSON config.
void apply_config(CLI::App* sub, RunConfig& c) {
  if (c.config.empty()) return;
  const auto cfg = io::read_json_file(c.config);
  if (!cfg.is_object()) throw io::FormatError(c.config + ": config must be a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    std::string key = it.key();
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError(c.config + ": unknown key " + it.key());
    }
    if (opt->count() > 0 || key == "config") continue;
    const auto& v = it.value();
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_boolean()) text = v.get<bool>() ? "true" : "false";
    else if (v.is_number_integer()) text = std::to_string(v.get<long long>());
    else if (v.is_number()) text = io::format_double(v.get<double>());
    else throw UsageError(c.config + ": unsupported value for " + it.key());
    if (opt->get_type_size() == 0) {  // flag
      if (text == "true") opt->add_result("true");
    } else {
      opt->add_result(text);
    }
    opt->run_callback();
  }
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frame, operator and matrix scaling experiments"};
  app.require_subcommand(1);
  RunConfig c;
  struct Sub {
    const char* name;
    const char* help;
  };
  std::vector<CLI::App*> subs;
  for (const Sub s : {Sub{"gen", "generate a frame, operator or matrix"},
                      Sub{"flow", "run a gradient flow and emit the trace"},
                      Sub{"solve", "Paulsen problem: --basic or --smoothed"},
                      Sub{"capacity", "capacity with bracket and certificate"},
                      Sub{"perturb", "perturbation statistics"},
                      Sub{"check", "invariant suite; --trace validates a CSV trace"}}) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, c);
    if (std::string(s.name) == "solve") {
      sub->add_flag("--basic", c.basic, "flow-based solver");
      sub->add_flag("--smoothed", c.smoothed, "perturb-and-flow solver");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    CLI::App* sub = nullptr;
    for (auto* s : subs)
      if (s->parsed()) sub = s;
    c.command = sub->get_name();
    apply_config(sub, c);
    c.validate();

    ordered_json result;
    bool ok = true;
    std::string trace;
    if (c.command == "gen") result = cmd_gen(c);
    else if (c.command == "flow") result = cmd_flow(c, c.trace.empty() ? nullptr : &trace);
    else if (c.command == "solve") result = cmd_solve(c);
    else if (c.command == "capacity") result = cmd_capacity(c);
    else if (c.command == "perturb") result = cmd_perturb(c);
    else result = cmd_check(c, ok, out);

    if (c.command == "flow" && !c.trace.empty()) io::write_text_file(c.trace, trace);
    const std::string text = result.dump(2) + "\n";
    if (c.out.empty()) {
      if (c.command != "check") out << text;
    } else {
      io::write_text_file(c.out, text);
    }
    return ok ? kOk : kInvariant;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    err << "io error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const DegenerateInput& e) {
    err << "degenerate input: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace frameflow::cli
