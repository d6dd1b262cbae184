#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qvi/moving_set.hpp"
#include "qvi/operators.hpp"
#include "qvi/sets.hpp"

namespace qvi {

/// Find x in P_C(z) with z in Phi(x) solving the variational inequality of
/// T over Phi(x).
class Problem {
 public:
  /// Throws DimensionError on mismatched dimensions and DomainError unless
  /// L >= mu > 0.
  Problem(ConvexSet domain, MovingSet constraint_map, MonotoneMap op);

  const ConvexSet& domain() const { return domain_; }
  const MovingSet& constraint_map() const { return phi_; }
  const MonotoneMap& op() const { return op_; }
  Index dim() const { return dim_; }

 private:
  ConvexSet domain_;
  MovingSet phi_;
  MonotoneMap op_;
  Index dim_;
};

struct DRParams {
  double xi = 1.0;
  double alpha = 0.5;
  double beta = 0.5;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  /// Keep the staggered trajectory and the per-iteration trace rows.
  bool record_trace = false;
};

/// xi defaults to 1/L; beta = 2l and alpha = max(beta / L_xiT, L_xiT).
///
/// Degenerate constants fall back as follows: l = 0 takes beta = alpha L_xiT,
/// and L_xiT = 0 takes alpha = beta = 1/2 (the certificate is then void).
DRParams default_dr_params(const Problem& prob, std::optional<double> xi = std::nullopt);

/// Outcome of checking 2l <= beta <= alpha L_xiT, alpha + 2 L_xiT < 1 and
/// L/mu < 5/3. Violations do not stop a solve; they void the delta
/// certificate.
struct ParamCheck {
  double modulus = 0.0;  ///< L_xiT
  double gamma = 0.0;    ///< L / mu
  double delta = 0.0;    ///< alpha + 2 L_xiT
  bool beta_above_2l = false;
  bool beta_below_alpha_modulus = false;
  bool delta_below_one = false;
  bool gamma_below_five_thirds = false;
  std::vector<std::string> violations;

  bool feasible() const { return violations.empty(); }
};

ParamCheck validate_params(const Problem& prob, const DRParams& p);

/// The iterate w = (z, y, x).
struct TripleState {
  Point z;
  Point y;
  Point x;
};

/// alpha |z| + |y| + beta |x|.
double weighted_norm(const TripleState& w, double alpha, double beta);
/// weighted_norm(a - b, alpha, beta).
double weighted_distance(const TripleState& a, const TripleState& b, double alpha, double beta);

/// rho(z, y, x) = (P_{Phi(x)}(y), R_{xi T}(2 P_{Phi(x)}(y) - y), P_C(z)).
TripleState rho_map(const Problem& prob, const DRParams& p, const TripleState& w);

enum class SolveStatus { converged, max_iter, invalid_params };

const char* to_string(SolveStatus s);

struct TraceRow {
  double dz = 0.0;
  double dy = 0.0;
  double dx = 0.0;
  /// Fixed-point residual at (z_{k+1}, x_k).
  double residual = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::invalid_params;
  std::size_t iterations = 0;
  TripleState final;
  /// Per-iteration step change |y_{k+1} - y_k| + |x_{k+1} - x_k| (DR) or
  /// |y_{k+1} - y_k| per inner step (baseline).
  std::vector<double> residual_history;
  double delta = 0.0;
  bool certificate_valid = false;
  /// delta^k times the initial staggered weighted error, measured against
  /// the final iterate. Empty when the certificate is void.
  std::vector<double> theoretical_bounds;
  double elapsed = 0.0;
  std::vector<std::string> notes;

  /// Staggered triples (z_{k+1}, y_k, x_k), k = 0..iterations-1, in the
  /// indexing of the a-priori error estimate. Filled on record_trace.
  std::vector<TripleState> trajectory;
  std::vector<TraceRow> trace;

  /// Baseline only.
  std::size_t outer_cycles = 0;
  std::size_t reseeds = 0;
};

/// Douglas-Rachford iteration
///   z_{k+1} = P_{Phi(x_k)}(y_k)
///   y_{k+1} = R_{xi T}(2 z_{k+1} - y_k)
///   x_{k+1} = P_C(z_{k+1})
/// until |y_{k+1} - y_k| + |x_{k+1} - x_k| <= tol or max_iter.
SolveReport solve_dr(const Problem& prob, const DRParams& p, const Point& x0, const Point& y0);

/// |z - P_{Phi(x)}(z - xi T z)| + |x - P_C(z)|; zero exactly at
/// projected-solution pairs.
double residual(const Problem& prob, double xi, const Point& z, const Point& x);

/// delta^k * w_err0.
double theoretical_bound(std::size_t k, double delta, double w_err0);

/// K with residual(z, x) <= K (alpha |z - z*| + |y - y*| + beta |x - x*|):
/// K = max((3 + xi L) / alpha, (1 + l) / beta).
double residual_bound_scale(const Problem& prob, const DRParams& p);

}  // namespace qvi
