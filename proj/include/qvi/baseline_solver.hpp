#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qvi/dr_solver.hpp"
#include "qvi/sampler.hpp"

namespace qvi {

struct BaselineParams {
  /// Projected-gradient step; mu / L^2 when unset.
  std::optional<double> gamma_step;
  double inner_tol = 1e-8;
  double outer_tol = 1e-8;
  std::size_t max_outer = 10000;
  std::size_t max_inner = 100000;
  std::uint64_t seed = 20240521;
};

/// Definition-based method: an inner projected-gradient loop
/// y <- P_{Phi(x)}(y - gamma T y) to a fixed point, an outer update
/// x <- P_C(y), and a seeded random restart inside Phi(x) whenever the
/// current y has left the moved set.
///
/// `iterations` counts inner projection steps; `outer_cycles` counts
/// x-updates and `reseeds` counts random restarts.
SolveReport solve_baseline(const Problem& prob, const BaselineParams& p, const Point& x0,
                           const Point& y0);

/// Deterministic-given-seed point of S: uniform in boxes, uniform parameter
/// on segments, projection of a uniform bounding-box draw for polytopes (a
/// Gaussian draw about the feasible point when unbounded), Gaussian for the
/// full space.
Point sample_point(const ConvexSet& s, Rng& rng);
Point sample_point(const ConvexSet& s, std::uint64_t seed);

}  // namespace qvi
