#include "qvi/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qvi/errors.hpp"

namespace qvi {
namespace {

constexpr double kDampedTol = 1e-12;
constexpr long kDampedMaxIter = 1000000;

void require_constants(double lipschitz, double monotonicity, const char* what) {
  if (!std::isfinite(lipschitz) || !std::isfinite(monotonicity))
    throw DomainError(std::string(what) + ": constants must be finite");
  if (lipschitz < 0.0) throw DomainError(std::string(what) + ": L must be nonnegative");
  if (monotonicity > lipschitz)
    throw DomainError(std::string(what) + ": declared mu exceeds L");
}

}  // namespace

double AffineMap::spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double AffineMap::min_symmetric_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

AffineMap::AffineMap(Matrix m, Point q) : m_(std::move(m)), q_(std::move(q)) {
  if (q_.size() == 0) throw DimensionError("affine map: dimension must be positive");
  if (m_.rows() != q_.size() || m_.cols() != q_.size())
    throw DimensionError("affine map: matrix must be square and match the offset");
  if (!m_.allFinite()) throw DomainError("affine map: matrix entries must be finite");
  require_finite(q_, "affine map offset");
  l_ = spectral_norm(m_);
  mu_ = min_symmetric_eigenvalue(m_);
}

AffineMap::AffineMap(Matrix m, Point q, double lipschitz, double monotonicity)
    : AffineMap(std::move(m), std::move(q)) {
  require_constants(lipschitz, monotonicity, "affine map");
  const double slack = 1e-9 * std::max(1.0, l_);
  if (lipschitz < l_ - slack)
    throw DomainError("affine map: declared L = " + std::to_string(lipschitz) +
                      " is below the spectral norm " + std::to_string(l_));
  if (monotonicity > mu_ + slack)
    throw DomainError("affine map: declared mu = " + std::to_string(monotonicity) +
                      " exceeds the true strong-monotonicity modulus " + std::to_string(mu_));
  l_ = lipschitz;
  mu_ = monotonicity;
}

GeneralMap::GeneralMap(Index dim, Rule rule, double lipschitz, double monotonicity)
    : dim_(dim), rule_(std::move(rule)), l_(lipschitz), mu_(monotonicity) {
  if (dim_ <= 0) throw DimensionError("general map: dimension must be positive");
  if (!rule_) throw std::invalid_argument("general map: rule is empty");
  require_constants(lipschitz, monotonicity, "general map");
}

Point GeneralMap::operator()(const Point& x) const {
  require_dim(dim_, x, "general map argument");
  Point out = rule_(x);
  require_dim(dim_, out, "general map value");
  return out;
}

double MonotoneMap::lipschitz() const {
  return std::visit([](const auto& m) { return m.lipschitz(); }, map_);
}

double MonotoneMap::monotonicity() const {
  return std::visit([](const auto& m) { return m.monotonicity(); }, map_);
}

Index MonotoneMap::dim() const {
  return std::visit([](const auto& m) { return m.dim(); }, map_);
}

Point MonotoneMap::operator()(const Point& x) const {
  require_dim(dim(), x, "evaluate");
  return std::visit([&](const auto& m) { return Point(m(x)); }, map_);
}

Point evaluate(const MonotoneMap& t, const Point& x) { return t(x); }

Resolvent::Resolvent(MonotoneMap t, double xi) : t_(std::move(t)), xi_(xi) {
  if (!(xi_ > 0.0) || !std::isfinite(xi_)) throw DomainError("resolvent: step xi must be positive");
  if (t_.is_affine()) {
    const Matrix& m = t_.affine().matrix();
    const Matrix system = Matrix::Identity(m.rows(), m.cols()) + xi_ * m;
    auto lu = std::make_shared<Eigen::FullPivLU<Matrix>>(system);
    if (!lu->isInvertible())
      throw DomainError("resolvent: I + xi M is singular (inconsistent monotonicity constants)");
    lu_ = std::move(lu);
  }
}

Point Resolvent::operator()(const Point& v) const {
  require_dim(t_.dim(), v, "resolvent argument");
  if (lu_) return lu_->solve(v - xi_ * t_.affine().offset());

  const double tau = (1.0 + xi_ * t_.monotonicity()) /
                     ((1.0 + xi_ * t_.lipschitz()) * (1.0 + xi_ * t_.lipschitz()));
  const double tol = kDampedTol * std::max(1.0, v.norm());
  Point u = v;
  for (long it = 0; it < kDampedMaxIter; ++it) {
    const Point gap = u + xi_ * t_(u) - v;
    if (gap.norm() <= tol) return u;
    u -= tau * gap;
  }
  throw ConvergenceError("resolvent: damped iteration did not converge; check declared L and mu");
}

Point resolvent(const MonotoneMap& t, double xi, const Point& v) { return Resolvent(t, xi)(v); }

Point reflected_resolvent(const MonotoneMap& t, double xi, const Point& v) {
  return Resolvent(t, xi).reflect(v);
}

double contraction_modulus(double lipschitz, double monotonicity, double xi) {
  if (!(monotonicity > 0.0)) throw DomainError("contraction_modulus: mu must be positive");
  if (lipschitz < monotonicity) throw DomainError("contraction_modulus: requires L >= mu");
  if (!(xi > 0.0)) throw DomainError("contraction_modulus: xi must be positive");
  const double xm = xi * monotonicity;
  if (lipschitz == monotonicity) {
    // gamma = 1: the radicand is the perfect square ((1 - xi mu)/(1 + xi mu))^2.
    return std::abs(1.0 - xm) / (1.0 + xm);
  }
  const double radicand = 1.0 - 4.0 * xm / (1.0 + 2.0 * xm + xi * xi * lipschitz * lipschitz);
  if (radicand < 0.0) {
    if (radicand > -1e-15) return 0.0;
    throw DomainError("contraction_modulus: negative radicand (inconsistent L and mu)");
  }
  return std::sqrt(radicand);
}

StepChoice optimal_stepsize(double lipschitz, double monotonicity) {
  if (!(monotonicity > 0.0)) throw DomainError("optimal_stepsize: mu must be positive");
  if (lipschitz < monotonicity) throw DomainError("optimal_stepsize: requires L >= mu");
  const double gamma = lipschitz / monotonicity;
  return {1.0 / lipschitz, std::sqrt((gamma - 1.0) / (gamma + 1.0))};
}

ConstantEstimate estimate_constants(const MonotoneMap& t, const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  const Point origin = Point::Zero(t.dim());
  double lip = 0.0;
  double mono = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const Point x = gaussian_point(rng, origin, cfg.scale);
    const Point y = gaussian_point(rng, origin, cfg.scale);
    const Point d = x - y;
    const double d2 = d.squaredNorm();
    if (d2 == 0.0) continue;
    const Point dt = t(x) - t(y);
    lip = std::max(lip, dt.norm() / std::sqrt(d2));
    mono = std::min(mono, dt.dot(d) / d2);
  }
  if (!std::isfinite(mono)) mono = 0.0;
  return {lip, mono};
}

}  // namespace qvi
