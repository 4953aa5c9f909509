#ifndef FRAMEFLOW_IO_HPP_
#define FRAMEFLOW_IO_HPP_

#include "frameflow/capacity.hpp"
#include "frameflow/dynamics.hpp"
#include "frameflow/paulsen.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace frameflow::io {

using nlohmann::ordered_json;
using Object = std::variant<Framed, OperatorTupled, NonNegMatrixd>;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Objects. Frame vectors are stored as a list of n vectors of length d;
// matrices row-major.
ordered_json to_json(const Framed& f);
ordered_json to_json(const OperatorTupled& u);
ordered_json to_json(const NonNegMatrixd& a);
ordered_json to_json(const Object& obj);
Object object_from_json(const ordered_json& j);
std::string kind_of(const Object& obj);

ordered_json to_json(const CapacityResult<double>& c);
ordered_json to_json(const PathRecord& r);
ordered_json to_json(const PathTrace& t);
PathTrace path_trace_from_json(const ordered_json& j);

// Trajectory CSV: header t,s,delta,ds_dt,dDelta_dt,movement,logdetX,logdetY.
extern const char* const kTraceHeader;
void write_trace_csv(std::ostream& os, const std::vector<TrajectorySample<double>>& samples);
std::vector<TrajectorySample<double>> read_trace_csv(std::istream& is);

// %.17g formatting.
std::string format_double(double x);

ordered_json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace frameflow::io

#endif  // FRAMEFLOW_IO_HPP_
