#include "qvi/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qvi/errors.hpp"
#include "qvi/verify.hpp"

namespace qvi::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultTol = 1e-8;
constexpr std::size_t kDefaultMaxIter = 100000;
constexpr std::size_t kDefaultMaxOuter = 10000;
constexpr std::uint64_t kDefaultSeed = 20240521;

json vec(const Point& p) {
  json a = json::array();
  for (Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

std::string fmt_point(const Point& p) {
  std::ostringstream s;
  s << std::setprecision(10) << '(';
  for (Index i = 0; i < p.size(); ++i) s << (i ? ", " : "") << p[i];
  s << ')';
  return s.str();
}

std::string fmt_g(double v, int precision = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw InputError("--out", "cannot write \"" + path + "\"");
  o << text;
}

json report_header(const ProblemFile& f, const char* command) {
  return {{"tool_version", kToolVersion},
          {"problem_hash", problem_hash(f)},
          {"command", command},
          {"runs", json::array()},
          {"checks", json::array()},
          {"timings", json::array()}};
}

json timing_json(const RunRecord& r) {
  return {{"algorithm", r.algorithm}, {"start", r.start}, {"elapsed", r.report.elapsed}};
}

json param_check_json(const ParamCheck& c, const DRParams& p) {
  return {{"name", "parameters"},
          {"xi", p.xi},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"modulus", c.modulus},
          {"gamma", c.gamma},
          {"delta", c.delta},
          {"feasible", c.feasible()},
          {"violations", c.violations}};
}

void emit(const json& report, const CommandOptions& opts, std::ostream& out, bool to_stdout) {
  const std::string text = report.dump(2) + "\n";
  if (opts.out) {
    write_file(*opts.out, text);
  } else if (to_stdout) {
    out << text;
  }
}

// Loads the file and runs `body`, mapping failures onto exit codes.
template <class Body>
int guarded(const CommandOptions& opts, std::ostream& err, Body&& body) {
  try {
    const ProblemFile f = load_problem_file(opts.file);
    return body(f);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  }
}

void write_traces(const ProblemFile& f, const ResolvedParams& p,
                  const std::vector<RunRecord>& runs, const std::string& path) {
  for (const RunRecord& r : runs)
    write_file(indexed_path(path, r.start, f.starts.size()),
               trace_csv(f.problem, p.dr, r.report));
}

}  // namespace

ResolvedParams resolve_params(const ProblemFile& f, const CommandOptions& opts) {
  ResolvedParams r;
  const FileParams& fp = f.params;
  r.dr = default_dr_params(f.problem, fp.xi);
  if (fp.alpha) r.dr.alpha = *fp.alpha;
  if (fp.beta) r.dr.beta = *fp.beta;
  const double tol = opts.tol.value_or(fp.tol.value_or(kDefaultTol));
  r.dr.tol = tol;
  r.dr.max_iter = opts.max_iter.value_or(fp.max_iter.value_or(kDefaultMaxIter));
  r.seed = opts.seed.value_or(fp.seed.value_or(kDefaultSeed));
  r.baseline.gamma_step = fp.gamma_step;
  r.baseline.inner_tol = tol;
  r.baseline.outer_tol = tol;
  r.baseline.max_outer = opts.max_iter.value_or(fp.max_iter.value_or(kDefaultMaxOuter));
  r.baseline.seed = r.seed;
  return r;
}

RunRecord run_dr(const ProblemFile& f, const ResolvedParams& p, std::size_t start) {
  const StartPoint& s = f.starts.at(start);
  RunRecord r{"dr", start, solve_dr(f.problem, p.dr, s.x0, s.y0), 0.0};
  r.residual = residual(f.problem, p.dr.xi, r.report.final.z, r.report.final.x);
  return r;
}

RunRecord run_baseline(const ProblemFile& f, const ResolvedParams& p, std::size_t start) {
  const StartPoint& s = f.starts.at(start);
  RunRecord r{"baseline", start, solve_baseline(f.problem, p.baseline, s.x0, s.y0), 0.0};
  r.residual = residual(f.problem, p.dr.xi, r.report.final.z, r.report.final.x);
  return r;
}

json run_json(const RunRecord& r) {
  json j = {{"algorithm", r.algorithm},
            {"start", r.start},
            {"status", to_string(r.report.status)},
            {"iterations", r.report.iterations},
            {"final_x", vec(r.report.final.x)},
            {"final_z", vec(r.report.final.z)},
            {"residual", r.residual},
            {"notes", r.report.notes}};
  if (r.algorithm == "dr") {
    j["certificate"] = r.report.certificate_valid ? json(r.report.delta) : json("void");
  } else {
    j["certificate"] = "none";
    j["outer_cycles"] = r.report.outer_cycles;
    j["reseeds"] = r.report.reseeds;
  }
  return j;
}

std::string trace_csv(const Problem& prob, const DRParams& p, const SolveReport& r) {
  std::ostringstream s;
  s << "iter,dz,dy,dx,residual,bound\n";
  double scale = 0.0;
  double e0 = 0.0;
  const bool bounded = r.certificate_valid && !r.trajectory.empty();
  if (bounded) {
    scale = residual_bound_scale(prob, p);
    e0 = weighted_distance(r.trajectory.front(), r.final, p.alpha, p.beta);
  }
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    const TraceRow& t = r.trace[k];
    s << k << ',' << fmt_g(t.dz) << ',' << fmt_g(t.dy) << ',' << fmt_g(t.dx) << ','
      << fmt_g(t.residual) << ',';
    if (bounded) s << fmt_g(scale * theoretical_bound(k, r.delta, e0));
    s << '\n';
  }
  return s.str();
}

std::string indexed_path(const std::string& path, std::size_t i, std::size_t n) {
  if (n <= 1) return path;
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string suffix = "_" + std::to_string(i);
  if (!has_ext) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int run_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(opts, err, [&](const ProblemFile& f) {
    ResolvedParams p = resolve_params(f, opts);
    p.dr.record_trace = opts.trace.has_value();
    json report = report_header(f, "solve");
    report["checks"].push_back(param_check_json(validate_params(f.problem, p.dr), p.dr));
    std::vector<RunRecord> runs;
    bool all_converged = true;
    for (std::size_t i = 0; i < f.starts.size(); ++i) {
      RunRecord r = run_dr(f, p, i);
      all_converged = all_converged && r.report.status == SolveStatus::converged;
      report["runs"].push_back(run_json(r));
      report["timings"].push_back(timing_json(r));
      if (opts.out) {
        out << "start " << i << ": " << to_string(r.report.status) << " after "
            << r.report.iterations << " iterations, x = " << fmt_point(r.report.final.x)
            << ", z = " << fmt_point(r.report.final.z) << ", residual = " << r.residual << '\n';
      }
      runs.push_back(std::move(r));
    }
    if (opts.trace) write_traces(f, p, runs, *opts.trace);
    emit(report, opts, out, true);
    if (!all_converged) {
      err << "solver did not converge within " << p.dr.max_iter << " iterations\n";
      return static_cast<int>(kExitNonConvergence);
    }
    return static_cast<int>(kExitOk);
  });
}

int run_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(opts, err, [&](const ProblemFile& f) {
    const ResolvedParams p = resolve_params(f, opts);
    json report = report_header(f, "compare");
    bool all_converged = true;
    out << std::left << std::setw(7) << "start" << std::setw(10) << "algorithm" << std::right
        << std::setw(12) << "iterations" << std::setw(14) << "elapsed_s" << std::setw(14)
        << "residual" << "  status\n";
    for (std::size_t i = 0; i < f.starts.size(); ++i) {
      for (const RunRecord& r : {run_dr(f, p, i), run_baseline(f, p, i)}) {
        all_converged = all_converged && r.report.status == SolveStatus::converged;
        report["runs"].push_back(run_json(r));
        report["timings"].push_back(timing_json(r));
        out << std::left << std::setw(7) << i << std::setw(10) << r.algorithm << std::right
            << std::setw(12) << r.report.iterations << std::setw(14) << std::scientific
            << std::setprecision(3) << r.report.elapsed << std::setw(14) << r.residual
            << std::defaultfloat << "  " << to_string(r.report.status) << '\n';
      }
    }
    emit(report, opts, out, false);
    return static_cast<int>(all_converged ? kExitOk : kExitNonConvergence);
  });
}

int run_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(opts, err, [&](const ProblemFile& f) {
    const ResolvedParams p = resolve_params(f, opts);
    const Problem& prob = f.problem;
    SamplerConfig cfg;
    cfg.seed = p.seed;
    json report = report_header(f, "verify");
    auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };

    // (A1) holds by construction: every set kind is closed and convex and
    // polytopes certify a feasible point when built.
    const Point feasible = center(prob.domain());
    out << "A1 domain C nonempty closed convex: PASS (feasible point " << fmt_point(feasible)
        << ")\n";
    report["checks"].push_back({{"name", "A1"}, {"holds", true}, {"feasible_point", vec(feasible)}});

    // (A2): Phi(x) is built nonempty closed convex; probe that projections
    // onto sampled Phi(x) are idempotent.
    bool a2 = true;
    {
      Rng rng(cfg.seed);
      const Point c = center(prob.domain());
      for (int i = 0; i < 1000 && a2; ++i) {
        const Point x = sample_point(prob.domain(), rng);
        const Point u = prob.constraint_map().project(x, gaussian_point(rng, c, cfg.scale));
        a2 = (prob.constraint_map().project(x, u) - u).norm() <= 1e-10 * (1.0 + u.norm());
      }
    }
    out << "A2 Phi(x) nonempty closed convex (projection probes): " << verdict(a2) << '\n';
    report["checks"].push_back({{"name", "A2"}, {"holds", a2}});

    const OperatorReport a3 = check_operator(prob.op(), cfg);
    out << "A3 T Lipschitz/strongly monotone: " << verdict(a3.holds)
        << " (declared L = " << a3.declared_lipschitz << ", mu = " << a3.declared_monotonicity
        << "; estimated L = " << a3.estimate.lipschitz << ", mu = " << a3.estimate.monotonicity
        << ")\n";
    report["checks"].push_back({{"name", "A3"},
                                {"holds", a3.holds},
                                {"declared_L", a3.declared_lipschitz},
                                {"declared_mu", a3.declared_monotonicity},
                                {"estimated_L", a3.estimate.lipschitz},
                                {"estimated_mu", a3.estimate.monotonicity}});

    const double l = prob.constraint_map().lipschitz();
    const A4Report a4 = check_a4(prob.constraint_map(), prob.domain(), l, cfg);
    out << "A4 projection-Lipschitz with l = " << l << ": " << verdict(a4.holds)
        << " (max sampled ratio " << a4.max_ratio << " over " << a4.trials << " samples)\n";
    json a4j = {{"name", "A4"}, {"holds", a4.holds}, {"l", l}, {"max_ratio", a4.max_ratio}};
    if (!a4.holds) {
      out << "   violation witness: x = " << fmt_point(a4.witness_x)
          << ", y = " << fmt_point(a4.witness_y) << ", z = " << fmt_point(a4.witness_z) << '\n';
      a4j["witness"] = {{"x", vec(a4.witness_x)}, {"y", vec(a4.witness_y)}, {"z", vec(a4.witness_z)}};
    }
    report["checks"].push_back(std::move(a4j));

    if (prob.constraint_map().realizable()) {
      SamplerConfig hcfg = cfg;
      hcfg.trials = 200;
      hcfg.probes = 2000;
      const HausdorffReport h = check_a4_implies_hausdorff(prob.constraint_map(), prob.domain(), l, hcfg);
      out << "   Hausdorff-Lipschitz with l: " << verdict(h.holds) << " (max sampled ratio "
          << h.max_ratio << ")\n";
      report["checks"].push_back(
          {{"name", "hausdorff"}, {"holds", h.holds}, {"max_ratio", h.max_ratio}});
    }

    const ParamCheck pc = validate_params(prob, p.dr);
    out << "Parameters xi = " << p.dr.xi << ", alpha = " << p.dr.alpha << ", beta = " << p.dr.beta
        << ", L_xiT = " << pc.modulus << ", gamma = " << pc.gamma << '\n';
    if (pc.feasible()) {
      out << "Parameter conditions: FEASIBLE, contraction delta = " << pc.delta << '\n';
    } else {
      out << "Parameter conditions: INFEASIBLE (delta = " << pc.delta << ", certificate void)\n";
      for (const std::string& v : pc.violations) out << "   violated: " << v << '\n';
    }
    report["checks"].push_back(param_check_json(pc, p.dr));
    emit(report, opts, out, false);
    return static_cast<int>(kExitOk);
  });
}

int run_bench(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.repeats == 0) {
    err << "input error: --repeats must be positive\n";
    return kExitInputError;
  }
  return guarded(opts, err, [&](const ProblemFile& f) {
    ResolvedParams p = resolve_params(f, opts);
    p.dr.record_trace = true;
    json report = report_header(f, "bench");
    report["repeats"] = opts.repeats;

    struct Series {
      RunRecord first;
      std::vector<double> elapsed;
      bool deterministic = true;
    };
    std::map<std::pair<std::size_t, std::string>, Series> series;
    for (std::size_t rep = 0; rep < opts.repeats; ++rep) {
      for (std::size_t i = 0; i < f.starts.size(); ++i) {
        for (RunRecord& r : std::vector<RunRecord>{run_dr(f, p, i), run_baseline(f, p, i)}) {
          const auto key = std::make_pair(i, r.algorithm);
          auto it = series.find(key);
          if (it == series.end()) {
            const double e = r.report.elapsed;
            it = series.emplace(key, Series{std::move(r), {}, true}).first;
            it->second.elapsed.push_back(e);
          } else {
            it->second.deterministic = it->second.deterministic &&
                                       it->second.first.report.iterations == r.report.iterations;
            it->second.elapsed.push_back(r.report.elapsed);
          }
        }
      }
    }

    bool all_converged = true;
    std::vector<RunRecord> dr_runs;
    out << std::left << std::setw(7) << "start" << std::setw(10) << "algorithm" << std::right
        << std::setw(12) << "iterations" << std::setw(18) << "median_elapsed_s" << '\n';
    for (auto& [key, s] : series) {
      std::vector<double> e = s.elapsed;
      std::sort(e.begin(), e.end());
      const double median = e.size() % 2 ? e[e.size() / 2] : 0.5 * (e[e.size() / 2 - 1] + e[e.size() / 2]);
      all_converged = all_converged && s.first.report.status == SolveStatus::converged;
      json row = run_json(s.first);
      row["deterministic_iterations"] = s.deterministic;
      report["runs"].push_back(std::move(row));
      report["timings"].push_back({{"algorithm", key.second},
                                   {"start", key.first},
                                   {"median_elapsed", median},
                                   {"samples", s.elapsed}});
      out << std::left << std::setw(7) << key.first << std::setw(10) << key.second << std::right
          << std::setw(12) << s.first.report.iterations << std::setw(18) << std::scientific
          << std::setprecision(3) << median << std::defaultfloat << '\n';
      if (key.second == "dr") dr_runs.push_back(s.first);
    }
    write_traces(f, p, dr_runs, opts.trace.value_or("bench_trace.csv"));
    emit(report, opts, out, false);
    return static_cast<int>(all_converged ? kExitOk : kExitNonConvergence);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projected-solution solver for quasi-variational inequalities", "qvi"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> trace;
  std::optional<std::string> out_path;
  std::size_t repeats = 10;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opts.file, "Problem file (JSON)")->required();
    sub->add_option("--tol", tol, "Stopping tolerance");
    sub->add_option("--max-iter", max_iter, "Iteration cap");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--out", out_path, "Write the JSON report to this path");
  };
  CLI::App* solve = app.add_subcommand("solve", "Run the Douglas-Rachford iteration from each start");
  add_common(solve);
  solve->add_option("--trace", trace, "Write the per-iteration CSV trace");
  CLI::App* compare = app.add_subcommand("compare", "Compare Douglas-Rachford with the baseline");
  add_common(compare);
  CLI::App* verify = app.add_subcommand("verify", "Check the standing assumptions and parameters");
  add_common(verify);
  CLI::App* bench = app.add_subcommand("bench", "Repeat the comparison and record timings");
  add_common(bench);
  bench->add_option("--repeats", repeats, "Number of repeats");
  bench->add_option("--trace", trace, "CSV path for residual-versus-bound traces");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(kExitInputError);
  }
  opts.tol = tol;
  opts.max_iter = max_iter;
  opts.seed = seed;
  opts.trace = trace;
  opts.out = out_path;
  opts.repeats = repeats;

  if (solve->parsed()) return run_solve(opts, out, err);
  if (compare->parsed()) return run_compare(opts, out, err);
  if (verify->parsed()) return run_verify(opts, out, err);
  return run_bench(opts, out, err);
}

}  // namespace qvi::cli
