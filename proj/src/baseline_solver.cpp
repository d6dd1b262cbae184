#include "qvi/baseline_solver.hpp"

#include <chrono>
#include <random>

namespace qvi {

Point sample_point(const ConvexSet& s, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform_in = [&](const Box& b) {
    Point p(b.dim());
    for (Index i = 0; i < b.dim(); ++i)
      p[i] = b.lower()[i] + unit(rng) * (b.upper()[i] - b.lower()[i]);
    return p;
  };
  if (const auto* b = std::get_if<Box>(&s)) return uniform_in(*b);
  if (const auto* seg = std::get_if<Segment>(&s)) return seg->a() + unit(rng) * (seg->b() - seg->a());
  if (const auto* poly = std::get_if<Polytope>(&s)) {
    const Point draw = poly->box() ? uniform_in(*poly->box())
                                   : gaussian_point(rng, poly->feasible_point(), 1.0);
    return project_polytope(*poly, draw);
  }
  return gaussian_point(rng, Point::Zero(dim(s)), 1.0);
}

Point sample_point(const ConvexSet& s, std::uint64_t seed) {
  Rng rng(seed);
  return sample_point(s, rng);
}

SolveReport solve_baseline(const Problem& prob, const BaselineParams& p, const Point& x0,
                           const Point& y0) {
  SolveReport report;
  const Index n = prob.dim();
  if (x0.size() != n || y0.size() != n) {
    report.notes.emplace_back("starting point dimension does not match the problem");
    return report;
  }
  const double lip = prob.op().lipschitz();
  const double gamma = p.gamma_step.value_or(prob.op().monotonicity() / (lip * lip));
  if (!(gamma > 0.0) || !(p.inner_tol > 0.0) || !(p.outer_tol > 0.0) || p.max_outer == 0 ||
      p.max_inner == 0) {
    report.notes.emplace_back("gamma_step, tolerances and iteration caps must be positive");
    return report;
  }

  const MovingSet& phi = prob.constraint_map();
  Rng rng(p.seed);

  Point x = x0;
  if (!contains(prob.domain(), x0, 1e-12)) {
    x = project(prob.domain(), x0);
    report.notes.emplace_back("x0 was outside C and has been projected onto C");
  }
  Point y = y0;
  {
    Point inside = phi.project(x, y);
    if ((inside - y).norm() > p.inner_tol) {
      y = std::move(inside);
      report.notes.emplace_back("y0 was outside Phi(x0) and has been projected into it");
    }
  }

  report.status = SolveStatus::max_iter;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t outer = 0; outer < p.max_outer; ++outer) {
    for (std::size_t inner = 0; inner < p.max_inner; ++inner) {
      Point y_next = phi.project(x, y - gamma * prob.op()(y));
      const double dy = (y_next - y).norm();
      report.residual_history.push_back(dy);
      ++report.iterations;
      y = std::move(y_next);
      if (dy <= p.inner_tol) break;
    }

    Point x_next = project(prob.domain(), y);
    ++report.outer_cycles;
    const bool settled = (x_next - x).norm() <= p.outer_tol;
    x = std::move(x_next);
    if (settled) {
      report.status = SolveStatus::converged;
      break;
    }

    const Point inside = phi.project(x, y);
    if ((inside - y).norm() > p.inner_tol) {
      if (phi.realizable()) {
        y = sample_point(phi.at(x), rng);
      } else {
        y = inside;
      }
      ++report.reseeds;
    }
  }
  report.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.final = {y, y, x};
  return report;
}

}  // namespace qvi
