#include "qvi/verify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qvi/baseline_solver.hpp"

namespace qvi {

A4Report check_a4(const MovingSet& phi, const ConvexSet& domain, double l,
                  const SamplerConfig& cfg) {
  A4Report r;
  r.bound = l;
  Rng rng(cfg.seed);
  const Point c = center(domain);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    Point x = sample_point(domain, rng);
    Point y = sample_point(domain, rng);
    Point z = gaussian_point(rng, c, cfg.scale);
    ++r.trials;
    const double dxy = (x - y).norm();
    if (dxy == 0.0) continue;
    const double ratio = (phi.project(x, z) - phi.project(y, z)).norm() / dxy;
    if (ratio > r.max_ratio || r.witness_x.size() == 0) {
      r.max_ratio = std::max(r.max_ratio, ratio);
      r.witness_x = std::move(x);
      r.witness_y = std::move(y);
      r.witness_z = std::move(z);
    }
  }
  r.holds = r.max_ratio <= l + 1e-10;
  return r;
}

HausdorffReport check_a4_implies_hausdorff(const MovingSet& phi, const ConvexSet& domain,
                                           double l, const SamplerConfig& cfg) {
  if (!phi.realizable())
    throw std::invalid_argument("check_a4_implies_hausdorff: moving set cannot be realized");
  HausdorffReport r;
  r.bound = l;
  r.max_excess = -std::numeric_limits<double>::infinity();
  Rng rng(cfg.seed);
  SamplerConfig probe_cfg = cfg;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const Point x = sample_point(domain, rng);
    const Point y = sample_point(domain, rng);
    probe_cfg.seed = cfg.seed + 1 + i;
    const double dh = hausdorff_estimate(phi.at(x), phi.at(y), probe_cfg);
    const double dxy = (x - y).norm();
    ++r.trials;
    const double excess = dh - l * dxy;
    if (excess > r.max_excess) {
      r.max_excess = excess;
      if (r.witness_x.size() == 0 || dxy > 0.0) {
        r.witness_x = x;
        r.witness_y = y;
      }
    }
    if (dxy > 0.0) r.max_ratio = std::max(r.max_ratio, dh / dxy);
  }
  if (r.trials == 0) r.max_excess = 0.0;
  r.holds = r.max_excess <= r.slack;
  return r;
}

AttouchWetsReport check_attouch_wets(const ConvexSet& a, const ConvexSet& b, const Point& x0,
                                     const SamplerConfig& cfg) {
  AttouchWetsReport r;
  r.lhs = (project(a, x0) - project(b, x0)).norm();
  r.rho = x0.norm() + distance(x0, a) + distance(x0, b);
  if (r.rho == 0.0) {
    // x0 = 0 lies in both sets, so both projections coincide.
    r.holds = r.lhs == 0.0;
    return r;
  }
  SamplerConfig probe_cfg = cfg;
  probe_cfg.probes = std::max<std::size_t>(cfg.probes, 16);
  LocalizedHausdorff current = localized_hausdorff_estimate(a, b, r.rho, probe_cfg);
  double resolution = current.value;
  for (int refine = 0; refine < 6; ++refine) {
    probe_cfg.probes *= 2;
    const LocalizedHausdorff next = localized_hausdorff_estimate(a, b, r.rho, probe_cfg);
    resolution = std::abs(next.value - current.value);
    current = next;
    if (resolution <= 1e-9) break;
  }
  r.localized_hausdorff = current.value;
  r.empty = current.empty;
  r.probes = probe_cfg.probes;
  r.rhs = std::sqrt(r.rho * r.localized_hausdorff);
  r.slack = std::sqrt(r.rho * resolution) + 1e-12;
  r.holds = r.lhs <= r.rhs + r.slack;
  return r;
}

OperatorReport check_operator(const MonotoneMap& t, const SamplerConfig& cfg) {
  OperatorReport r;
  r.estimate = estimate_constants(t, cfg);
  r.declared_lipschitz = t.lipschitz();
  r.declared_monotonicity = t.monotonicity();
  const double slack = 1e-9 * std::max(1.0, r.declared_lipschitz);
  r.holds = r.estimate.lipschitz <= r.declared_lipschitz + slack &&
            r.estimate.monotonicity >= r.declared_monotonicity - slack;
  return r;
}

Example1 example1_instance() {
  Matrix a_map = Matrix::Zero(2, 2);
  a_map(1, 0) = 1.0;  // (x, 0) -> (0, x)
  MovingSet phi = MovingSet::segment_family(Point::Zero(2), a_map, Point::Unit(2, 0),
                                            Matrix::Zero(2, 2), 1.0);
  return {std::move(phi), Box(Point::Zero(2), Point::Unit(2, 0))};
}

Problem example2_instance() {
  Polytope domain(Box::unit(2), {Halfspace{Point::Ones(2), 1.0}});
  const double l = 1.0 / 64.0;
  MovingSet phi = MovingSet::translated(Box::unit(2), l * Matrix::Identity(2, 2), l);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.22;
  m(1, 1) = 0.25;
  AffineMap t(m, Point::Zero(2), 0.25, 0.22);
  return Problem(std::move(domain), std::move(phi), std::move(t));
}

}  // namespace qvi
