#pragma once

// Random problem pieces shared by the unit tests and the acceptance binary.

#include <random>
#include <string>
#include <variant>

#include "oracles.hpp"
#include "qvi/sets.hpp"

namespace qvi::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Box random_box(std::mt19937_64& rng, Index n) {
  Point lo(n);
  Point hi(n);
  for (Index i = 0; i < n; ++i) {
    lo[i] = uniform(rng, -2.0, 1.0);
    hi[i] = lo[i] + uniform(rng, 0.2, 2.0);
  }
  return Box(lo, hi);
}

inline Segment random_segment(std::mt19937_64& rng, Index n) {
  return Segment(gaussian(rng, n), gaussian(rng, n));
}

/// Box with one to three cutting half spaces, each leaving the box center
/// strictly feasible.
inline Polytope random_polytope(std::mt19937_64& rng, Index n) {
  const Box box = random_box(rng, n);
  const int cuts = 1 + static_cast<int>(rng() % 3);
  std::vector<Halfspace> hs;
  for (int i = 0; i < cuts; ++i) {
    Point normal = gaussian(rng, n);
    if (normal.norm() < 1e-3) normal = Point::Ones(n);
    const double half_width = 0.5 * (box.upper() - box.lower()).minCoeff();
    hs.push_back({normal, normal.dot(box.center()) - uniform(rng, 0.2, 1.0) * half_width *
                                                          normal.norm()});
  }
  return Polytope(box, hs);
}

inline ConvexSet random_set(std::mt19937_64& rng, Index n, int kind) {
  switch (kind % 3) {
    case 0:
      return random_box(rng, n);
    case 1:
      return random_segment(rng, n);
    default:
      return random_polytope(rng, n);
  }
}

struct OracleComparison {
  bool ok = false;
  double deviation = 0.0;  ///< |library - grid minimizer|
  double tolerance = 0.0;
  std::string detail;
};

/// Compares project(set, z) with a brute-force grid minimizer: the library
/// point must be feasible, at least as close to z as every grid node, and
/// within the grid tolerance of the grid minimizer.
inline OracleComparison compare_with_grid(const ConvexSet& set, const Point& z) {
  const Point p = project(set, z);
  const Index n = dim(set);
  GridMin g;
  if (const auto* seg = std::get_if<Segment>(&set)) {
    g = segment_grid_minimize(seg->a(), seg->b(), 20001, z, p);
  } else {
    Box bounds = std::holds_alternative<Box>(set) ? std::get<Box>(set) : *std::get<Polytope>(set).box();
    const int per_axis = n == 1 ? 20001 : (n == 2 ? 401 : 61);
    auto feasible = [&](const Vec& v) {
      if (const auto* poly = std::get_if<Polytope>(&set)) return poly->max_violation(v) <= 0.0;
      return true;
    };
    g = grid_minimize(bounds.lower(), bounds.upper(), per_axis, feasible, z, p);
  }
  OracleComparison c;
  if (g.feasible_nodes == 0) {
    c.detail = "grid has no feasible node";
    return c;
  }
  const double pd = (z - p).norm();
  c.deviation = (g.argmin - p).norm();
  c.tolerance = grid_tolerance(pd, g.gap);
  const bool inside = contains(set, p, 1e-9);
  const bool closest = pd <= g.dist + 1e-12;
  c.ok = inside && closest && c.deviation <= c.tolerance;
  if (!inside) c.detail = "projection outside the set";
  else if (!closest) c.detail = "a grid node is closer than the projection";
  else if (!c.ok) c.detail = "grid minimizer too far from the projection";
  return c;
}

}  // namespace qvi::testing
