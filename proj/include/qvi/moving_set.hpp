#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "qvi/sets.hpp"

namespace qvi {

/// The constraint map x -> Phi(x) together with its declared
/// projection-Lipschitz constant l, i.e.
///   |P_{Phi(x)}(z) - P_{Phi(y)}(z)| <= l |x - y|  for all z.
///
/// Three kinds are supported:
///   - translated base:  Phi(x) = base + S x
///   - segment family:   Phi(x) = [a0 + A x, b0 + B x]
///   - custom:           caller-supplied projection rule, optionally with a
///                       rule that realizes Phi(x) as a ConvexSet.
///
/// For the custom kind `lipschitz()` is whatever the caller asserts.
class MovingSet {
 public:
  enum class Kind { translated_base, segment_family, custom };

  using ProjectionRule = std::function<Point(const Point& x, const Point& z)>;
  using RealizeRule = std::function<ConvexSet(const Point& x)>;

  /// Throws DomainError when the operator 2-norm of `shift` exceeds `l`.
  static MovingSet translated(ConvexSet base, Matrix shift, double l);
  static MovingSet segment_family(Point a0, Matrix a_map, Point b0, Matrix b_map, double l);
  static MovingSet custom(Index dim, ProjectionRule project, double l,
                          RealizeRule realize = {});

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }
  double lipschitz() const { return l_; }

  /// P_{Phi(x)}(z).
  Point project(const Point& x, const Point& z) const;
  /// Phi(x) as a concrete set; throws std::logic_error for a custom map
  /// without a realize rule.
  ConvexSet at(const Point& x) const;
  bool realizable() const { return kind_ != Kind::custom || static_cast<bool>(realize_); }

  // Kind-specific accessors; only meaningful for the matching kind.
  const ConvexSet& base() const { return *base_; }
  const Matrix& shift() const { return shift_; }
  const Point& a0() const { return a0_; }
  const Matrix& a_map() const { return a_map_; }
  const Point& b0() const { return b0_; }
  const Matrix& b_map() const { return b_map_; }

 private:
  MovingSet() = default;

  Kind kind_ = Kind::custom;
  Index dim_ = 0;
  double l_ = 0.0;
  std::shared_ptr<const ConvexSet> base_;
  Matrix shift_;
  Point a0_;
  Matrix a_map_;
  Point b0_;
  Matrix b_map_;
  ProjectionRule project_;
  RealizeRule realize_;
};

Point moving_project(const MovingSet& phi, const Point& x, const Point& z);

/// Spectral norm by power iteration on S^T S.
double operator_norm(const Matrix& s, int max_iter = 1000, double tol = 1e-14);

}  // namespace qvi
