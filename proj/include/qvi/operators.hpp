#pragma once

#include <functional>
#include <memory>
#include <variant>

#include <Eigen/LU>

#include "qvi/sampler.hpp"
#include "qvi/sets.hpp"

namespace qvi {

/// T(x) = M x + q.
///
/// The two-argument constructor computes L as the spectral norm of M and mu
/// as the smallest eigenvalue of (M + M^T)/2. The four-argument form takes
/// declared constants and rejects them if they are not valid bounds
/// (L below the spectral norm or mu above the true modulus).
class AffineMap {
 public:
  AffineMap(Matrix m, Point q);
  AffineMap(Matrix m, Point q, double lipschitz, double monotonicity);

  const Matrix& matrix() const { return m_; }
  const Point& offset() const { return q_; }
  double lipschitz() const { return l_; }
  double monotonicity() const { return mu_; }
  Index dim() const { return q_.size(); }

  Point operator()(const Point& x) const { return m_ * x + q_; }

  /// Exact constants of the matrix, independent of any declaration.
  static double spectral_norm(const Matrix& m);
  static double min_symmetric_eigenvalue(const Matrix& m);

 private:
  Matrix m_;
  Point q_;
  double l_ = 0.0;
  double mu_ = 0.0;
};

/// A nonlinear single-valued map with caller-declared constants.
class GeneralMap {
 public:
  using Rule = std::function<Point(const Point&)>;

  GeneralMap(Index dim, Rule rule, double lipschitz, double monotonicity);

  double lipschitz() const { return l_; }
  double monotonicity() const { return mu_; }
  Index dim() const { return dim_; }
  Point operator()(const Point& x) const;

 private:
  Index dim_;
  Rule rule_;
  double l_;
  double mu_;
};

/// The single-valued operator T of the inclusion, affine or general.
class MonotoneMap {
 public:
  MonotoneMap(AffineMap map) : map_(std::move(map)) {}  // NOLINT(google-explicit-constructor)
  MonotoneMap(GeneralMap map) : map_(std::move(map)) {}  // NOLINT(google-explicit-constructor)

  double lipschitz() const;
  double monotonicity() const;
  Index dim() const;
  bool is_affine() const { return std::holds_alternative<AffineMap>(map_); }
  const AffineMap& affine() const { return std::get<AffineMap>(map_); }

  Point operator()(const Point& x) const;

 private:
  std::variant<AffineMap, GeneralMap> map_;
};

Point evaluate(const MonotoneMap& t, const Point& x);

/// J = (I + xi T)^{-1}, set up once for a fixed step.
///
/// Affine maps factor (I + xi M) up front. General maps run the damped
/// iteration u <- u - tau (u + xi T(u) - v), tau = (1 + xi mu) / (1 + xi L)^2,
/// which contracts for any 0 < mu <= L; it stops at
/// |u + xi T(u) - v| <= 1e-12 max(1, |v|) and throws ConvergenceError after
/// 1e6 steps.
class Resolvent {
 public:
  Resolvent(MonotoneMap t, double xi);

  Point operator()(const Point& v) const;
  /// R = 2J - I.
  Point reflect(const Point& v) const { return 2.0 * (*this)(v) - v; }

  double step() const { return xi_; }

 private:
  MonotoneMap t_;
  double xi_;
  std::shared_ptr<const Eigen::FullPivLU<Matrix>> lu_;
};

Point resolvent(const MonotoneMap& t, double xi, const Point& v);
Point reflected_resolvent(const MonotoneMap& t, double xi, const Point& v);

/// Lipschitz modulus of the reflected resolvent of xi T:
///   sqrt(1 - 4 xi mu / (1 + 2 xi mu + xi^2 L^2)).
/// Requires L >= mu > 0 and xi > 0 (DomainError otherwise).
double contraction_modulus(double lipschitz, double monotonicity, double xi);

struct StepChoice {
  double xi = 0.0;
  double modulus = 0.0;
};

/// xi* = 1/L with modulus sqrt((g - 1)/(g + 1)), g = L/mu.
StepChoice optimal_stepsize(double lipschitz, double monotonicity);

struct ConstantEstimate {
  double lipschitz = 0.0;
  double monotonicity = 0.0;
};

/// Sampled max of |T x - T y| / |x - y| and min of <T x - T y, x - y>/|x - y|^2
/// over `cfg.trials` Gaussian pairs.
ConstantEstimate estimate_constants(const MonotoneMap& t, const SamplerConfig& cfg = {});

}  // namespace qvi
