#include "frameflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace frameflow::io {

namespace {

ordered_json matrix_rows(const Eigen::MatrixXd& a) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const ordered_json& j, Index rows, Index cols, const char* what) {
  if (!j.is_array() || Index(j.size()) != rows) throw FormatError(std::string(what) + ": wrong row count");
  Eigen::MatrixXd a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[std::size_t(i)];
    if (!row.is_array() || Index(row.size()) != cols)
      throw FormatError(std::string(what) + ": wrong column count");
    for (Index c = 0; c < cols; ++c) {
      if (!row[std::size_t(c)].is_number()) throw FormatError(std::string(what) + ": non-numeric entry");
      a(i, c) = row[std::size_t(c)].get<double>();
    }
  }
  return a;
}

Index positive_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw FormatError(std::string("missing integer field ") + key);
  const auto v = j[key].get<long long>();
  if (v <= 0) throw FormatError(std::string("field must be positive: ") + key);
  return Index(v);
}

}  // namespace

ordered_json to_json(const Framed& f) {
  ordered_json j;
  j["kind"] = "frame";
  j["d"] = f.d();
  j["n"] = f.n();
  j["vectors"] = matrix_rows(f.vectors().transpose());
  return j;
}

ordered_json to_json(const OperatorTupled& u) {
  ordered_json j;
  j["kind"] = "operator";
  j["m"] = u.m();
  j["n"] = u.n();
  j["k"] = u.k();
  ordered_json mats = ordered_json::array();
  for (const auto& a : u.mats()) mats.push_back(matrix_rows(a));
  j["mats"] = std::move(mats);
  return j;
}

ordered_json to_json(const NonNegMatrixd& a) {
  ordered_json j;
  j["kind"] = "matrix";
  j["m"] = a.m();
  j["n"] = a.n();
  j["entries"] = matrix_rows(a.entries());
  return j;
}

ordered_json to_json(const Object& obj) {
  return std::visit([](const auto& o) { return to_json(o); }, obj);
}

std::string kind_of(const Object& obj) {
  switch (obj.index()) {
    case 0: return "frame";
    case 1: return "operator";
    default: return "matrix";
  }
}

Object object_from_json(const ordered_json& j) {
  // gen output wraps the object
  if (j.is_object() && j.contains("object") && j["object"].is_object()) return object_from_json(j["object"]);
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw FormatError("missing kind");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "frame") {
      const Index d = positive_field(j, "d"), n = positive_field(j, "n");
      return Framed(Eigen::MatrixXd(rows_matrix(j.at("vectors"), n, d, "vectors").transpose()));
    }
    if (kind == "operator") {
      const Index m = positive_field(j, "m"), n = positive_field(j, "n"), k = positive_field(j, "k");
      const auto& mats = j.at("mats");
      if (!mats.is_array() || Index(mats.size()) != k) throw FormatError("mats: wrong count");
      std::vector<Eigen::MatrixXd> out;
      for (const auto& a : mats) out.push_back(rows_matrix(a, m, n, "mats"));
      return OperatorTupled(std::move(out));
    }
    if (kind == "matrix") {
      const Index m = positive_field(j, "m"), n = positive_field(j, "n");
      const Eigen::MatrixXd a = rows_matrix(j.at("entries"), m, n, "entries");
      if ((a.array() < 0).any()) throw FormatError("entries: negative value");
      return NonNegMatrixd(a);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
  throw FormatError("unknown kind: " + kind);
}

ordered_json to_json(const CapacityResult<double>& c) {
  ordered_json j;
  j["value"] = c.value;
  j["method"] = to_string(c.method);
  if (c.certificate) {
    j["certificate"] = {{"rows", c.certificate->rows}, {"cols", c.certificate->cols}};
  } else {
    j["certificate"] = nullptr;
  }
  j["lower"] = c.lower;
  j["upper"] = c.upper;
  j["converged"] = c.converged;
  j["iterations"] = c.iterations;
  return j;
}

ordered_json to_json(const PathRecord& r) {
  return ordered_json{{"l", r.l},
                      {"sigma2", r.sigma2},
                      {"sigma2_formula", r.sigma2_formula},
                      {"target", r.target},
                      {"delta_before", r.delta_before},
                      {"delta_perturbed", r.delta_perturbed},
                      {"delta_flowed", r.delta_flowed},
                      {"delta_after", r.delta_after},
                      {"flow_time", r.flow_time},
                      {"rescale_factor", r.rescale_factor},
                      {"perturb_dist", r.perturb_dist},
                      {"movement", r.movement},
                      {"capacity_lower", r.capacity_lower},
                      {"s_after", r.s_after},
                      {"retries", r.retries},
                      {"halving_ok", r.halving_ok}};
}

ordered_json to_json(const PathTrace& t) {
  ordered_json j;
  j["seed"] = t.seed;
  j["zeta"] = t.zeta;
  j["kappa"] = t.kappa;
  j["delta0"] = t.delta0;
  j["demo_mode"] = t.demo_mode;
  j["assumptions_hold"] = t.assumptions_hold;
  j["downgraded"] = t.downgraded;
  j["converged"] = t.converged;
  j["warnings"] = t.warnings;
  ordered_json its = ordered_json::array();
  for (const auto& r : t.iterations) its.push_back(to_json(r));
  j["iterations"] = std::move(its);
  return j;
}

PathTrace path_trace_from_json(const ordered_json& j) {
  try {
    PathTrace t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.zeta = j.at("zeta").get<double>();
    t.kappa = j.at("kappa").get<double>();
    t.delta0 = j.at("delta0").get<double>();
    t.demo_mode = j.at("demo_mode").get<bool>();
    t.assumptions_hold = j.at("assumptions_hold").get<bool>();
    t.downgraded = j.at("downgraded").get<bool>();
    t.converged = j.at("converged").get<bool>();
    t.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& r : j.at("iterations")) {
      PathRecord p;
      p.l = r.at("l").get<std::size_t>();
      p.sigma2 = r.at("sigma2").get<double>();
      p.sigma2_formula = r.at("sigma2_formula").get<double>();
      p.target = r.at("target").get<double>();
      p.delta_before = r.at("delta_before").get<double>();
      p.delta_perturbed = r.at("delta_perturbed").get<double>();
      p.delta_flowed = r.at("delta_flowed").get<double>();
      p.delta_after = r.at("delta_after").get<double>();
      p.flow_time = r.at("flow_time").get<double>();
      p.rescale_factor = r.at("rescale_factor").get<double>();
      p.perturb_dist = r.at("perturb_dist").get<double>();
      p.movement = r.at("movement").get<double>();
      p.capacity_lower = r.at("capacity_lower").get<double>();
      p.s_after = r.at("s_after").get<double>();
      p.retries = r.at("retries").get<std::size_t>();
      p.halving_ok = r.at("halving_ok").get<bool>();
      t.iterations.push_back(p);
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("path trace: ") + e.what());
  }
}

const char* const kTraceHeader = "t,s,delta,ds_dt,dDelta_dt,movement,logdetX,logdetY";

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& os, const std::vector<TrajectorySample<double>>& samples) {
  os << kTraceHeader << '\n';
  for (const auto& s : samples) {
    os << format_double(s.t) << ',' << format_double(s.s) << ',' << format_double(s.delta) << ','
       << format_double(s.ds_dt) << ',' << format_double(s.ddelta_dt) << ',' << format_double(s.movement)
       << ',' << format_double(s.logdet_x) << ',' << format_double(s.logdet_y) << '\n';
  }
}

std::vector<TrajectorySample<double>> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("trace: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw FormatError("trace: unexpected header: " + line);
  std::vector<TrajectorySample<double>> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        v.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError("trace: bad number on line " + std::to_string(lineno));
      }
    }
    if (v.size() != 8) throw FormatError("trace: expected 8 fields on line " + std::to_string(lineno));
    TrajectorySample<double> s;
    s.t = v[0];
    s.s = v[1];
    s.delta = v[2];
    s.ds_dt = v[3];
    s.ddelta_dt = v[4];
    s.movement = v[5];
    s.logdet_x = v[6];
    s.logdet_y = v[7];
    out.push_back(std::move(s));
  }
  return out;
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace frameflow::io
