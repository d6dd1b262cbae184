#include "qvi/dr_solver.hpp"

#include <chrono>
#include <cmath>

#include "qvi/errors.hpp"

namespace qvi {

Problem::Problem(ConvexSet domain, MovingSet constraint_map, MonotoneMap op)
    : domain_(std::move(domain)),
      phi_(std::move(constraint_map)),
      op_(std::move(op)),
      dim_(qvi::dim(domain_)) {
  if (phi_.dim() != dim_ || op_.dim() != dim_)
    throw DimensionError("problem: domain, constraint map and operator dimensions differ");
  if (!(op_.monotonicity() > 0.0))
    throw DomainError("problem: operator must be strongly monotone (mu > 0)");
  if (op_.lipschitz() < op_.monotonicity())
    throw DomainError("problem: operator constants must satisfy L >= mu");
}

DRParams default_dr_params(const Problem& prob, std::optional<double> xi) {
  DRParams p;
  const double lip = prob.op().lipschitz();
  const double mu = prob.op().monotonicity();
  p.xi = xi.value_or(optimal_stepsize(lip, mu).xi);
  const double modulus = contraction_modulus(lip, mu, p.xi);
  const double l = prob.constraint_map().lipschitz();
  if (modulus > 0.0) {
    if (l > 0.0) {
      p.beta = 2.0 * l;
      p.alpha = std::max(p.beta / modulus, modulus);
    } else {
      p.alpha = modulus;
      p.beta = modulus * modulus;
    }
  } else {
    p.alpha = 0.5;
    p.beta = 0.5;
  }
  return p;
}

ParamCheck validate_params(const Problem& prob, const DRParams& p) {
  ParamCheck c;
  const double lip = prob.op().lipschitz();
  const double mu = prob.op().monotonicity();
  const double l = prob.constraint_map().lipschitz();
  c.modulus = contraction_modulus(lip, mu, p.xi);
  c.gamma = lip / mu;
  c.delta = p.alpha + 2.0 * c.modulus;

  c.beta_above_2l = 2.0 * l <= p.beta;
  c.beta_below_alpha_modulus = p.beta <= p.alpha * c.modulus;
  c.delta_below_one = c.delta < 1.0;
  c.gamma_below_five_thirds = c.gamma < 5.0 / 3.0;
  if (!c.beta_above_2l) c.violations.emplace_back("2l <= beta");
  if (!c.beta_below_alpha_modulus) c.violations.emplace_back("beta <= alpha L_xiT");
  if (!c.delta_below_one) c.violations.emplace_back("alpha + 2 L_xiT < 1");
  if (!c.gamma_below_five_thirds) c.violations.emplace_back("gamma < 5/3");
  return c;
}

double weighted_norm(const TripleState& w, double alpha, double beta) {
  return alpha * w.z.norm() + w.y.norm() + beta * w.x.norm();
}

double weighted_distance(const TripleState& a, const TripleState& b, double alpha, double beta) {
  return alpha * (a.z - b.z).norm() + (a.y - b.y).norm() + beta * (a.x - b.x).norm();
}

TripleState rho_map(const Problem& prob, const DRParams& p, const TripleState& w) {
  const Resolvent j(prob.op(), p.xi);
  TripleState out;
  out.z = prob.constraint_map().project(w.x, w.y);
  out.y = j.reflect(2.0 * out.z - w.y);
  out.x = project(prob.domain(), w.z);
  return out;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iter:
      return "max_iter";
    case SolveStatus::invalid_params:
      return "invalid_params";
  }
  return "unknown";
}

double residual(const Problem& prob, double xi, const Point& z, const Point& x) {
  const Point step = z - xi * prob.op()(z);
  return (z - prob.constraint_map().project(x, step)).norm() +
         (x - project(prob.domain(), z)).norm();
}

double theoretical_bound(std::size_t k, double delta, double w_err0) {
  return std::pow(delta, static_cast<double>(k)) * w_err0;
}

double residual_bound_scale(const Problem& prob, const DRParams& p) {
  const double lip = prob.op().lipschitz();
  const double l = prob.constraint_map().lipschitz();
  return std::max((3.0 + p.xi * lip) / p.alpha, (1.0 + l) / p.beta);
}

SolveReport solve_dr(const Problem& prob, const DRParams& p, const Point& x0, const Point& y0) {
  SolveReport report;
  const Index n = prob.dim();
  if (x0.size() != n || y0.size() != n) {
    report.notes.emplace_back("starting point dimension does not match the problem");
    return report;
  }
  if (!(p.xi > 0.0) || !(p.tol > 0.0) || p.max_iter == 0 || !(p.alpha > 0.0) ||
      !(p.beta > 0.0)) {
    report.notes.emplace_back("xi, alpha, beta, tol and max_iter must be positive");
    return report;
  }

  const ParamCheck check = validate_params(prob, p);
  report.delta = check.delta;
  report.certificate_valid = check.feasible();
  for (const std::string& v : check.violations)
    report.notes.push_back("certificate void: violated " + v);

  Point x = x0;
  if (!contains(prob.domain(), x0, 1e-12)) {
    x = project(prob.domain(), x0);
    report.notes.emplace_back("x0 was outside C and has been projected onto C");
  }
  Point y = y0;
  const Resolvent j(prob.op(), p.xi);
  const MovingSet& phi = prob.constraint_map();

  Point z;
  Point z_prev;
  Point z_first;
  const Point x_first = x;
  const Point y_first = y;
  report.status = SolveStatus::max_iter;
  report.residual_history.reserve(std::min<std::size_t>(p.max_iter, 4096));

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < p.max_iter; ++k) {
    z = phi.project(x, y);
    Point y_next = j.reflect(2.0 * z - y);
    Point x_next = project(prob.domain(), z);
    const double dy = (y_next - y).norm();
    const double dx = (x_next - x).norm();
    const double change = dy + dx;
    report.residual_history.push_back(change);
    if (k == 0) z_first = z;
    if (p.record_trace) {
      report.trajectory.push_back({z, y, x});
      report.trace.push_back(
          {k == 0 ? 0.0 : (z - z_prev).norm(), dy, dx, residual(prob, p.xi, z, x)});
    }
    z_prev = z;
    y = std::move(y_next);
    x = std::move(x_next);
    report.iterations = k + 1;
    if (change <= p.tol) {
      report.status = SolveStatus::converged;
      break;
    }
  }
  report.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.final = {z, y, x};

  if (report.certificate_valid) {
    const TripleState initial{z_first, y_first, x_first};
    const double e0 = weighted_distance(initial, report.final, p.alpha, p.beta);
    report.theoretical_bounds.reserve(report.iterations);
    for (std::size_t k = 0; k < report.iterations; ++k)
      report.theoretical_bounds.push_back(theoretical_bound(k, report.delta, e0));
  }
  return report;
}

}  // namespace qvi
