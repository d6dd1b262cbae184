#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvi/baseline_solver.hpp"
#include "qvi/cli/problem_io.hpp"
#include "qvi/dr_solver.hpp"

namespace qvi::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitNonConvergence = 3 };

struct CommandOptions {
  std::string file;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;
  /// CSV trace path; with several starts a "_<i>" suffix is inserted
  /// before the extension.
  std::optional<std::string> trace;
  std::size_t repeats = 10;
  std::optional<std::string> out;
};

/// Effective solver settings after merging file params and flags
/// (flags win; then the file; then defaults).
struct ResolvedParams {
  DRParams dr;
  BaselineParams baseline;
  std::uint64_t seed = 0;
};

ResolvedParams resolve_params(const ProblemFile& f, const CommandOptions& opts);

/// One solver run from one start, as it appears in reports.
struct RunRecord {
  std::string algorithm;  ///< "dr" or "baseline"
  std::size_t start = 0;
  SolveReport report;
  double residual = 0.0;
};

RunRecord run_dr(const ProblemFile& f, const ResolvedParams& p, std::size_t start);
RunRecord run_baseline(const ProblemFile& f, const ResolvedParams& p, std::size_t start);

/// Report JSON: {tool_version, problem_hash, command, runs, checks, timings}.
/// Everything except `timings` is byte-stable for identical inputs.
nlohmann::json run_json(const RunRecord& r);

/// CSV with columns iter,dz,dy,dx,residual,bound. `bound` is
/// K delta^k e0 (see residual_bound_scale) and empty when the certificate
/// is void.
std::string trace_csv(const Problem& prob, const DRParams& p, const SolveReport& r);

/// Path for start i of n: unchanged when n == 1, else "stem_i.ext".
std::string indexed_path(const std::string& path, std::size_t i, std::size_t n);

int run_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int run_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int run_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int run_bench(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qvi::cli
