#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvi/dr_solver.hpp"

namespace qvi::cli {

/// Schema violation in a problem file. `field()` is a JSON-pointer style
/// path to the offending entry, e.g. "/operator/matrix/1".
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct FileParams {
  std::optional<double> xi;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<double> gamma_step;
  std::optional<std::uint64_t> seed;
};

struct StartPoint {
  Point x0;
  Point y0;
};

struct ProblemFile {
  Problem problem;
  FileParams params;
  std::vector<StartPoint> starts;
};

/// Reads a real from a JSON number, a decimal string, or a fraction string
/// such as "1/128".
double parse_number(const nlohmann::json& value, const std::string& path);

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile load_problem_file(const std::string& path);

/// Canonical JSON rendering; parse_problem(to_json(f)) reproduces f.
nlohmann::json to_json(const ProblemFile& f);

/// FNV-1a 64-bit hash of the canonical rendering, as 16 hex digits.
std::string problem_hash(const ProblemFile& f);

}  // namespace qvi::cli
