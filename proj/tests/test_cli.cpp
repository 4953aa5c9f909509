#include <doctest.h>

#include "frameflow/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace frameflow;
using io::ordered_json;

namespace {

struct Outcome {
  int rc = 0;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "frameflow");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Outcome o;
  o.rc = cli::run(int(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "frameflow_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen emits each kind with a schema header") {
  for (const char* kind : {"frame", "operator", "matrix"}) {
    const auto o = invoke({"gen", "--kind", kind, "--seed", "3", "--d", "2", "--n", "5"});
    REQUIRE(o.rc == cli::kOk);
    const auto j = ordered_json::parse(o.out);
    CHECK(j["schema_version"] == "1");
    CHECK(j["seed"] == 3);
    CHECK(j["object"]["kind"] == kind);
  }
  const auto t = invoke({"gen", "--kind", "matrix", "--tight", "2"});
  REQUIRE(t.rc == cli::kOk);
  CHECK(ordered_json::parse(t.out)["object"]["m"] == 3);
  // same seed, same bytes
  CHECK(invoke({"gen", "--seed", "9"}).out == invoke({"gen", "--seed", "9"}).out);
  CHECK(invoke({"gen", "--seed", "9"}).out != invoke({"gen", "--seed", "10"}).out);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).rc == cli::kUsage);
  CHECK(invoke({"frobnicate"}).rc == cli::kUsage);
  CHECK(invoke({"gen", "--no-such-flag"}).rc == cli::kUsage);
  CHECK(invoke({"gen", "--kind", "tensor"}).rc == cli::kUsage);
  CHECK(invoke({"gen", "--d", "0"}).rc == cli::kUsage);
  CHECK(invoke({"solve"}).rc == cli::kUsage);
  CHECK(invoke({"solve", "--basic", "--smoothed"}).rc == cli::kUsage);
  CHECK(invoke({"capacity", "--in", scratch("missing.json").string()}).rc == cli::kUsage);
  CHECK(invoke({"gen", "--help"}).rc == cli::kOk);
}

TEST_CASE("flow writes a trace that check accepts") {
  const auto obj = scratch("frame.json");
  const auto trace = scratch("trace.csv");
  const auto out = scratch("flow.json");
  {
    const auto g = invoke({"gen", "--seed", "1", "--d", "3", "--n", "8", "--eps", "0.05"});
    REQUIRE(g.rc == cli::kOk);
    std::ofstream(obj) << ordered_json::parse(g.out)["object"].dump();
  }
  const auto f = invoke({"flow", "--in", obj.string(), "--trace", trace.string(), "--out", out.string()});
  REQUIRE(f.rc == cli::kOk);
  CHECK(f.out.empty());
  const auto j = ordered_json::parse(slurp(out));
  CHECK(j["status"] == "converged");
  CHECK(j["delta_final"].get<double>() <= 1e-10);
  CHECK(j["s_final"].get<double>() <= j["s0"].get<double>());
  CHECK(slurp(trace).rfind(io::kTraceHeader, 0) == 0);

  const auto c = invoke({"check", "--trace", trace.string()});
  CHECK(c.rc == cli::kOk);
  CHECK(c.out.find("FAIL") == std::string::npos);
  CHECK(c.out.find("PASS") != std::string::npos);

  // break monotonicity: swap the delta column of two rows
  std::istringstream is(slurp(trace));
  auto samples = io::read_trace_csv(is);
  REQUIRE(samples.size() > 4);
  std::swap(samples[1].delta, samples[3].delta);
  std::ostringstream os;
  io::write_trace_csv(os, samples);
  std::ofstream(trace) << os.str();
  const auto bad = invoke({"check", "--trace", trace.string()});
  CHECK(bad.rc == cli::kInvariant);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("capacity command") {
  const auto path = scratch("tight.json");
  {
    const auto g = invoke({"gen", "--kind", "matrix", "--tight", "3"});
    std::ofstream(path) << ordered_json::parse(g.out)["object"].dump();
  }
  const auto o = invoke({"capacity", "--in", path.string()});
  REQUIRE(o.rc == cli::kOk);
  const auto j = ordered_json::parse(o.out);
  CHECK(j["capacity"]["value"].get<double>() == 0.0);
  CHECK(j["capacity"]["certificate"].is_object());

  const auto f = ordered_json::parse(invoke({"capacity", "--kind", "frame", "--d", "2", "--n", "6"}).out);
  CHECK(f["capacity"]["method"] == "convex-descent");
  CHECK(f["capacity"]["converged"] == true);
  CHECK(f["capacity"]["value"].get<double>() <= f["s"].get<double>() * (1 + 1e-12));
}

TEST_CASE("solve and perturb commands") {
  const auto b = invoke({"solve", "--basic", "--seed", "2", "--d", "2", "--n", "8", "--trials", "2"});
  REQUIRE(b.rc == cli::kOk);
  const auto jb = ordered_json::parse(b.out);
  CHECK(jb["mode"] == "basic");
  CHECK(jb["trials"].size() == 2);
  CHECK(jb["summary"]["within_bound"] == true);
  CHECK(jb["summary"]["max_parseval_error"].get<double>() <= 1e-9);

  const auto s = invoke({"solve", "--smoothed", "--demo", "--seed", "2", "--d", "2", "--n", "30", "--eps", "0.001"});
  REQUIRE(s.rc == cli::kOk);
  const auto js = ordered_json::parse(s.out);
  CHECK(js["trials"][0]["converged"] == true);
  CHECK(js["trials"][0]["path"]["demo_mode"] == true);

  const auto p = invoke({"perturb", "--seed", "4", "--d", "3", "--n", "15", "--trials", "4"});
  REQUIRE(p.rc == cli::kOk);
  const auto jp = ordered_json::parse(p.out);
  CHECK(jp["trials"].size() == 4);
  CHECK(jp["summary"]["max_constraint_residual"].get<double>() <= 1e-12);
}

TEST_CASE("config file with flags taking precedence") {
  const auto cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"kind": "matrix", "m": 2, "n": 3, "seed": 5})";
  const auto a = ordered_json::parse(invoke({"gen", "--config", cfg.string()}).out);
  CHECK(a["object"]["kind"] == "matrix");
  CHECK(a["object"]["m"] == 2);
  CHECK(a["seed"] == 5);
  const auto b = ordered_json::parse(invoke({"gen", "--config", cfg.string(), "--m", "4"}).out);
  CHECK(b["object"]["m"] == 4);
  std::ofstream(cfg) << R"({"bogus": 1})";
  CHECK(invoke({"gen", "--config", cfg.string()}).rc == cli::kUsage);
}

TEST_CASE("degenerate input maps to the numeric exit code") {
  const auto path = scratch("flat.json");
  std::ofstream(path) << R"({"kind":"frame","d":2,"n":3,"vectors":[[1,0],[2,0],[3,0]]})";
  const auto o = invoke({"solve", "--smoothed", "--in", path.string()});
  CHECK(o.rc == cli::kNumeric);
  CHECK(o.err.find("degenerate") != std::string::npos);
}

TEST_CASE("installed binary exit codes") {
  const char* bin = std::getenv("FRAMEFLOW_BIN");
  if (!bin) return;
  const std::string b = std::string("\"") + bin + "\"";
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(b + " gen --seed 1") == 0);
  CHECK(status(b + " gen --bogus") == 1);
  CHECK(status(b + " solve") == 1);
}
