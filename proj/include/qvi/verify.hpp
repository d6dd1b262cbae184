#pragma once

#include <cstddef>

#include "qvi/dr_solver.hpp"
#include "qvi/moving_set.hpp"
#include "qvi/operators.hpp"
#include "qvi/sampler.hpp"
#include "qvi/sets.hpp"

namespace qvi {

/// Sampled projection-Lipschitz ratio |P_{Phi(x)}(z) - P_{Phi(y)}(z)| / |x - y|.
struct A4Report {
  double bound = 0.0;
  double max_ratio = 0.0;
  Point witness_x;
  Point witness_y;
  Point witness_z;
  std::size_t trials = 0;
  bool holds = false;  ///< max_ratio <= bound + 1e-10
};

/// x, y are drawn from `domain` with sample_point; z is Gaussian with
/// `cfg.scale` about the domain center.
A4Report check_a4(const MovingSet& phi, const ConvexSet& domain, double l,
                  const SamplerConfig& cfg = {});

/// Sampled Hausdorff-Lipschitz ratio d_H(Phi(x), Phi(y)) / |x - y|.
struct HausdorffReport {
  double bound = 0.0;
  double slack = 1e-6;
  double max_ratio = 0.0;
  /// Largest d_H estimate minus bound |x - y|; <= slack when the check holds.
  double max_excess = 0.0;
  Point witness_x;
  Point witness_y;
  std::size_t trials = 0;
  bool holds = false;
};

/// `cfg.trials` pairs, each estimated with `cfg.probes` probe points.
HausdorffReport check_a4_implies_hausdorff(const MovingSet& phi, const ConvexSet& domain,
                                           double l, const SamplerConfig& cfg = {});

/// |P_A(x0) - P_B(x0)| <= sqrt(rho d_{H,rho}(A, B)) with
/// rho = |x0| + d(x0, A) + d(x0, B).
struct AttouchWetsReport {
  double lhs = 0.0;
  double rho = 0.0;
  double localized_hausdorff = 0.0;
  double rhs = 0.0;
  /// Allowance for the sampled estimate: sqrt(rho * resolution), where the
  /// resolution is the change between the last two probe refinements.
  double slack = 0.0;
  std::size_t probes = 0;
  bool empty = false;
  bool holds = false;
};

/// Refines the localized estimate by doubling the probe count from
/// `cfg.probes` until it changes by at most 1e-9 or reaches 64x.
AttouchWetsReport check_attouch_wets(const ConvexSet& a, const ConvexSet& b, const Point& x0,
                                     const SamplerConfig& cfg = {1, 0, 1000, 10.0});

/// Sampled operator constants against the declared ones.
struct OperatorReport {
  ConstantEstimate estimate;
  double declared_lipschitz = 0.0;
  double declared_monotonicity = 0.0;
  bool holds = false;  ///< estimates within the declared bounds (1e-9 slack)
};

OperatorReport check_operator(const MonotoneMap& t, const SamplerConfig& cfg = {});

/// Phi(x, 0) = segment from (0, x) to (1, 0) over C = [0, 1] x {0}.
struct Example1 {
  MovingSet constraint_map;
  ConvexSet domain;
};

Example1 example1_instance();

/// C = {0 <= x <= 1 componentwise, x1 + x2 >= 1}, Phi(x) = [0,1]^2 + x / 64,
/// T = diag(0.22, 0.25) with L = 0.25, mu = 0.22.
Problem example2_instance();

}  // namespace qvi
