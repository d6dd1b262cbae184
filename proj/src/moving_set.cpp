#include "qvi/moving_set.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qvi/errors.hpp"

namespace qvi {
namespace {

void require_square(const Matrix& m, Index n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw DimensionError(std::string(what) + ": expected a " + std::to_string(n) + "x" +
                         std::to_string(n) + " matrix");
  if (!m.allFinite()) throw DomainError(std::string(what) + ": entries must be finite");
}

void require_lipschitz(double l) {
  if (!(l >= 0.0) || !std::isfinite(l))
    throw DomainError("moving set: lipschitz constant must be finite and nonnegative");
}

}  // namespace

double operator_norm(const Matrix& s, int max_iter, double tol) {
  if (s.size() == 0) return 0.0;
  const Matrix gram = s.transpose() * s;
  Point v(gram.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Point w = gram * v;
    const double next = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (std::abs(next - lambda) <= tol * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

MovingSet MovingSet::translated(ConvexSet base, Matrix shift, double l) {
  require_lipschitz(l);
  const Index n = qvi::dim(base);
  require_square(shift, n, "translated moving set shift");
  const double norm = operator_norm(shift);
  if (norm > l * (1.0 + 1e-9) + 1e-15)
    throw DomainError("translated moving set: shift operator norm " + std::to_string(norm) +
                      " exceeds declared lipschitz constant " + std::to_string(l));
  MovingSet m;
  m.kind_ = Kind::translated_base;
  m.dim_ = n;
  m.l_ = l;
  m.base_ = std::make_shared<const ConvexSet>(std::move(base));
  m.shift_ = std::move(shift);
  return m;
}

MovingSet MovingSet::segment_family(Point a0, Matrix a_map, Point b0, Matrix b_map, double l) {
  require_lipschitz(l);
  const Index n = a0.size();
  if (n == 0) throw DimensionError("segment family: dimension must be positive");
  require_dim(n, b0, "segment family b0");
  require_finite(a0, "segment family a0");
  require_finite(b0, "segment family b0");
  require_square(a_map, n, "segment family a_map");
  require_square(b_map, n, "segment family b_map");
  MovingSet m;
  m.kind_ = Kind::segment_family;
  m.dim_ = n;
  m.l_ = l;
  m.a0_ = std::move(a0);
  m.a_map_ = std::move(a_map);
  m.b0_ = std::move(b0);
  m.b_map_ = std::move(b_map);
  return m;
}

MovingSet MovingSet::custom(Index dim, ProjectionRule project, double l, RealizeRule realize) {
  require_lipschitz(l);
  if (dim <= 0) throw DimensionError("custom moving set: dimension must be positive");
  if (!project) throw std::invalid_argument("custom moving set: projection rule is empty");
  MovingSet m;
  m.kind_ = Kind::custom;
  m.dim_ = dim;
  m.l_ = l;
  m.project_ = std::move(project);
  m.realize_ = std::move(realize);
  return m;
}

Point MovingSet::project(const Point& x, const Point& z) const {
  require_dim(dim_, x, "moving set argument x");
  require_dim(dim_, z, "moving set argument z");
  switch (kind_) {
    case Kind::translated_base: {
      const Point offset = shift_ * x;
      return qvi::project(*base_, z - offset) + offset;
    }
    case Kind::segment_family:
      return project_segment(Segment(a0_ + a_map_ * x, b0_ + b_map_ * x), z);
    case Kind::custom: {
      Point p = project_(x, z);
      require_dim(dim_, p, "custom projection result");
      return p;
    }
  }
  throw std::logic_error("unreachable moving set kind");
}

ConvexSet MovingSet::at(const Point& x) const {
  require_dim(dim_, x, "moving set argument x");
  switch (kind_) {
    case Kind::translated_base: {
      const Point offset = shift_ * x;
      return std::visit(
          [&](const auto& s) -> ConvexSet {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Box>) {
              return Box(s.lower() + offset, s.upper() + offset);
            } else if constexpr (std::is_same_v<S, Segment>) {
              return Segment(s.a() + offset, s.b() + offset);
            } else if constexpr (std::is_same_v<S, Polytope>) {
              std::optional<Box> box;
              if (s.box()) box = Box(s.box()->lower() + offset, s.box()->upper() + offset);
              std::vector<Halfspace> hs = s.halfspaces();
              for (Halfspace& h : hs) h.offset += h.normal.dot(offset);
              return Polytope(std::move(box), std::move(hs));
            } else {
              return s;
            }
          },
          *base_);
    }
    case Kind::segment_family:
      return Segment(a0_ + a_map_ * x, b0_ + b_map_ * x);
    case Kind::custom:
      if (!realize_) throw std::logic_error("custom moving set has no realize rule");
      return realize_(x);
  }
  throw std::logic_error("unreachable moving set kind");
}

Point moving_project(const MovingSet& phi, const Point& x, const Point& z) {
  return phi.project(x, z);
}

}  // namespace qvi
