#include "qvi/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "qvi/errors.hpp"

namespace qvi {
namespace {

constexpr double kDykstraTol = 1e-12;
constexpr std::size_t kDykstraMaxSweeps = 100000;
constexpr std::size_t kMaxActiveSubsets = 200000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double feasibility_tol(const Point& z, const Point& b) {
  double scale = 1.0;
  if (z.size() > 0) scale += z.cwiseAbs().maxCoeff();
  if (b.size() > 0) scale += b.cwiseAbs().maxCoeff();
  return 1e-10 * scale;
}

double violation(const Matrix& a, const Point& b, const Point& z) {
  if (a.rows() == 0) return 0.0;
  return std::max(0.0, (b - a * z).maxCoeff());
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxActiveSubsets) return kMaxActiveSubsets + 1;
  }
  return r;
}

bool active_set_tractable(Index m, Index n) {
  std::size_t total = 0;
  for (Index k = 0; k <= std::min(m, n); ++k) {
    total += binomial(static_cast<std::size_t>(m), static_cast<std::size_t>(k));
    if (total > kMaxActiveSubsets) return false;
  }
  return true;
}

// Calls visit(indices) for every k-subset of {0..m-1}.
template <class Visit>
void for_each_subset(Index m, Index k, Visit&& visit) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > m) return;
  while (true) {
    visit(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Exact projection onto {v : A v >= b} by enumerating candidate active sets.
// Every face of the polyhedron is the solution set of some linearly
// independent subset of active constraints, so the nearest feasible
// candidate over all subsets is the projection. Returns nullopt when no
// candidate is feasible, i.e. the polyhedron is empty.
std::optional<Point> active_set_project(const Matrix& a, const Point& b,
                                        const Point& z) {
  const double tol = feasibility_tol(z, b);
  if (violation(a, b, z) <= 0.0) return z;
  const Index m = a.rows();
  const Index n = a.cols();
  std::optional<Point> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index k = 1; k <= std::min(m, n); ++k) {
    for_each_subset(m, k, [&](const std::vector<Index>& rows) {
      Matrix as(k, n);
      Point bs(k);
      for (Index r = 0; r < k; ++r) {
        as.row(r) = a.row(rows[static_cast<std::size_t>(r)]);
        bs[r] = b[rows[static_cast<std::size_t>(r)]];
      }
      Eigen::FullPivLU<Matrix> gram(as * as.transpose());
      if (!gram.isInvertible()) return;
      const Point lambda = gram.solve(as * z - bs);
      Point v = z - as.transpose() * lambda;
      if (violation(a, b, v) > tol) return;
      const double d = (v - z).norm();
      if (d < best_dist) {
        best_dist = d;
        best = std::move(v);
      }
    });
  }
  if (!best && violation(a, b, z) <= tol) return z;
  return best;
}

Point dykstra_project(const std::optional<Box>& box,
                      const std::vector<Halfspace>& halfspaces, const Point& z) {
  const std::size_t sets = halfspaces.size() + (box ? 1 : 0);
  std::vector<Point> increments(sets, Point::Zero(z.size()));
  // Iterates can sit still for whole sweeps while the increments keep
  // moving, so convergence is judged on both.
  std::vector<Point> iterates(sets, z);
  Point x = z;
  for (std::size_t sweep = 0; sweep < kDykstraMaxSweeps; ++sweep) {
    double moved = 0.0;
    auto step = [&](std::size_t i, const Point& shifted) {
      const Point increment = shifted - x;
      moved += (x - iterates[i]).norm() + (increment - increments[i]).norm();
      iterates[i] = x;
      increments[i] = increment;
    };
    std::size_t i = 0;
    if (box) {
      const Point shifted = x + increments[i];
      x = project_box(*box, shifted);
      step(i++, shifted);
    }
    for (const Halfspace& h : halfspaces) {
      const Point shifted = x + increments[i];
      x = project_halfspace(h, shifted);
      step(i++, shifted);
    }
    if (sweep > 0 && moved <= kDykstraTol) return x;
  }
  throw ConvergenceError("Dykstra projection did not converge within " +
                         std::to_string(kDykstraMaxSweeps) + " sweeps");
}

}  // namespace

void require_finite(const Point& p, const char* what) {
  if (!p.allFinite())
    throw DomainError(std::string(what) + ": coordinates must be finite");
}

void require_dim(Index expected, const Point& p, const char* what) {
  if (p.size() != expected)
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(expected) + ", got " +
                         std::to_string(p.size()));
}

Box::Box(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0) throw DimensionError("box: dimension must be positive");
  require_dim(lower_.size(), upper_, "box upper");
  require_finite(lower_, "box lower");
  require_finite(upper_, "box upper");
  if ((lower_.array() > upper_.array()).any())
    throw DomainError("box: lower bound exceeds upper bound");
}

Box Box::unit(Index n) { return Box(Point::Zero(n), Point::Ones(n)); }

Segment::Segment(Point a, Point b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() == 0) throw DimensionError("segment: dimension must be positive");
  require_dim(a_.size(), b_, "segment endpoint");
  require_finite(a_, "segment endpoint");
  require_finite(b_, "segment endpoint");
}

Polytope::Polytope(std::optional<Box> box, std::vector<Halfspace> halfspaces)
    : box_(std::move(box)), halfspaces_(std::move(halfspaces)) {
  if (box_) {
    dim_ = box_->dim();
  } else if (!halfspaces_.empty()) {
    dim_ = halfspaces_.front().normal.size();
  } else {
    throw DomainError("polytope: needs a bounding box or at least one half space");
  }
  if (dim_ == 0) throw DimensionError("polytope: dimension must be positive");
  for (const Halfspace& h : halfspaces_) {
    require_dim(dim_, h.normal, "polytope half-space normal");
    require_finite(h.normal, "polytope half-space normal");
    if (!std::isfinite(h.offset)) throw DomainError("polytope: offset must be finite");
    if (h.normal.norm() == 0.0) throw DomainError("polytope: half-space normal must be nonzero");
  }

  const Index box_rows = box_ ? 2 * dim_ : 0;
  const Index m = box_rows + static_cast<Index>(halfspaces_.size());
  a_ = Matrix::Zero(m, dim_);
  b_ = Point::Zero(m);
  if (box_) {
    for (Index i = 0; i < dim_; ++i) {
      a_(2 * i, i) = 1.0;
      b_[2 * i] = box_->lower()[i];
      a_(2 * i + 1, i) = -1.0;
      b_[2 * i + 1] = -box_->upper()[i];
    }
  }
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) {
    a_.row(box_rows + static_cast<Index>(k)) = halfspaces_[k].normal.transpose();
    b_[box_rows + static_cast<Index>(k)] = halfspaces_[k].offset;
  }

  const Point start = box_ ? box_->center() : Point::Zero(dim_);
  if (dim_ <= 3 && active_set_tractable(m, dim_)) {
    auto p = active_set_project(a_, b_, start);
    if (!p) throw DomainError("polytope: constraint system is infeasible (empty set)");
    feasible_ = *p;
  } else {
    try {
      feasible_ = dykstra_project(box_, halfspaces_, start);
    } catch (const ConvergenceError&) {
      throw DomainError("polytope: could not certify a feasible point (empty set?)");
    }
    if (violation(a_, b_, feasible_) > 1e-8 * (1.0 + b_.cwiseAbs().maxCoeff()))
      throw DomainError("polytope: constraint system is infeasible (empty set)");
  }
}

double Polytope::max_violation(const Point& z) const { return violation(a_, b_, z); }

FullSpace::FullSpace(Index n) : dim_(n) {
  if (n <= 0) throw DimensionError("full space: dimension must be positive");
}

Point project_box(const Box& box, const Point& z) {
  require_dim(box.dim(), z, "project_box");
  require_finite(z, "project_box");
  return z.cwiseMax(box.lower()).cwiseMin(box.upper());
}

Point project_segment(const Segment& seg, const Point& z) {
  require_dim(seg.dim(), z, "project_segment");
  require_finite(z, "project_segment");
  const Point d = seg.b() - seg.a();
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return seg.a();
  const double t = std::clamp((z - seg.a()).dot(d) / len2, 0.0, 1.0);
  return seg.a() + t * d;
}

Point project_halfspace(const Halfspace& h, const Point& z) {
  const double gap = h.offset - h.normal.dot(z);
  if (gap <= 0.0) return z;
  return z + (gap / h.normal.squaredNorm()) * h.normal;
}

Point project_polytope(const Polytope& poly, const Point& z, PolytopeMethod method) {
  require_dim(poly.dim(), z, "project_polytope");
  require_finite(z, "project_polytope");
  const Matrix& a = poly.constraint_matrix();
  if (method == PolytopeMethod::automatic) {
    method = (poly.dim() <= 3 && active_set_tractable(a.rows(), poly.dim()))
                 ? PolytopeMethod::active_set
                 : PolytopeMethod::dykstra;
  }
  if (method == PolytopeMethod::active_set) {
    auto p = active_set_project(a, poly.constraint_offsets(), z);
    // Nonemptiness is certified at construction, so this only fires on
    // catastrophic rounding.
    if (!p) throw ConvergenceError("active-set projection found no feasible candidate");
    return *p;
  }
  return dykstra_project(poly.box(), poly.halfspaces(), z);
}

Point project(const ConvexSet& set, const Point& z) {
  return std::visit(Overloaded{
                        [&](const Box& s) { return project_box(s, z); },
                        [&](const Segment& s) { return project_segment(s, z); },
                        [&](const Polytope& s) { return project_polytope(s, z); },
                        [&](const FullSpace& s) {
                          require_dim(s.dim(), z, "project");
                          return Point(z);
                        },
                    },
                    set);
}

double distance(const Point& z, const ConvexSet& set) { return (z - project(set, z)).norm(); }

Index dim(const ConvexSet& set) {
  return std::visit([](const auto& s) { return s.dim(); }, set);
}

bool contains(const ConvexSet& set, const Point& z, double tol) {
  return std::visit(
      Overloaded{
          [&](const Box& s) {
            require_dim(s.dim(), z, "contains");
            return ((z - s.lower()).array() >= -tol).all() &&
                   ((s.upper() - z).array() >= -tol).all();
          },
          [&](const Segment& s) { return (project_segment(s, z) - z).norm() <= tol; },
          [&](const Polytope& s) {
            require_dim(s.dim(), z, "contains");
            return s.max_violation(z) <= tol;
          },
          [&](const FullSpace& s) {
            require_dim(s.dim(), z, "contains");
            return true;
          },
      },
      set);
}

Point center(const ConvexSet& set) {
  return std::visit(Overloaded{
                        [](const Box& s) { return s.center(); },
                        [](const Segment& s) { return Point(0.5 * (s.a() + s.b())); },
                        [](const Polytope& s) {
                          if (s.box()) return project_polytope(s, s.box()->center());
                          return s.feasible_point();
                        },
                        [](const FullSpace& s) { return Point(Point::Zero(s.dim())); },
                    },
                    set);
}

std::vector<Point> extreme_points(const ConvexSet& set) {
  std::vector<Point> out;
  std::visit(
      Overloaded{
          [&](const Box& s) {
            const Index n = s.dim();
            if (n > 12) return;
            for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
              Point p(n);
              for (Index i = 0; i < n; ++i)
                p[i] = (mask >> i) & 1UL ? s.upper()[i] : s.lower()[i];
              out.push_back(std::move(p));
            }
          },
          [&](const Segment& s) {
            out.push_back(s.a());
            out.push_back(s.b());
          },
          [&](const Polytope& s) {
            const Matrix& a = s.constraint_matrix();
            const Point& b = s.constraint_offsets();
            const Index n = s.dim();
            if (n > 3 || !active_set_tractable(a.rows(), n)) return;
            for_each_subset(a.rows(), n, [&](const std::vector<Index>& rows) {
              Matrix as(n, n);
              Point bs(n);
              for (Index r = 0; r < n; ++r) {
                as.row(r) = a.row(rows[static_cast<std::size_t>(r)]);
                bs[r] = b[rows[static_cast<std::size_t>(r)]];
              }
              Eigen::FullPivLU<Matrix> lu(as);
              if (!lu.isInvertible()) return;
              Point v = lu.solve(bs);
              if (violation(a, b, v) > feasibility_tol(v, b)) return;
              for (const Point& seen : out)
                if ((seen - v).norm() <= 1e-12) return;
              out.push_back(std::move(v));
            });
          },
          [](const FullSpace&) {},
      },
      set);
  return out;
}

namespace {

double directed_sup(const ConvexSet& from, const ConvexSet& to, Rng& rng,
                    const SamplerConfig& cfg) {
  double sup = 0.0;
  for (const Point& u : extreme_points(from)) sup = std::max(sup, distance(u, to));
  const Point c = center(from);
  for (std::size_t i = 0; i < cfg.probes; ++i) {
    const Point u = project(from, gaussian_point(rng, c, cfg.scale));
    sup = std::max(sup, distance(u, to));
  }
  return sup;
}

// Point where the segment anchor -> u leaves the closed rho-ball. The norm is
// convex along the segment with |anchor| <= rho < |u|, so the crossing is
// unique.
Point retract_to_ball(const Point& anchor, const Point& u, double rho) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((anchor + mid * (u - anchor)).norm() <= rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return anchor + lo * (u - anchor);
}

// Directed sup of d(u, to) over probe points u of from ∩ rhoB; nullopt when
// the intersection is empty.
std::optional<double> localized_directed_sup(const ConvexSet& from, const ConvexSet& to,
                                             double rho, Rng& rng,
                                             const SamplerConfig& cfg) {
  const Index n = dim(from);
  const Point anchor = project(from, Point::Zero(n));
  if (anchor.norm() > rho) return std::nullopt;

  double sup = distance(anchor, to);
  auto visit = [&](const Point& u) {
    const Point v = u.norm() <= rho ? u : retract_to_ball(anchor, u, rho);
    sup = std::max(sup, distance(v, to));
  };
  for (const Point& u : extreme_points(from)) visit(u);
  const Point c = center(from);
  const Point origin = Point::Zero(n);
  for (std::size_t i = 0; i < cfg.probes; ++i) {
    const Point g = (i % 2 == 0) ? gaussian_point(rng, c, cfg.scale)
                                 : gaussian_point(rng, origin, rho);
    visit(project(from, g));
  }
  return sup;
}

}  // namespace

double hausdorff_estimate(const ConvexSet& a, const ConvexSet& b, const SamplerConfig& cfg) {
  if (dim(a) != dim(b)) throw DimensionError("hausdorff_estimate: set dimensions differ");
  Rng rng(cfg.seed);
  const double ab = directed_sup(a, b, rng, cfg);
  const double ba = directed_sup(b, a, rng, cfg);
  return std::max(ab, ba);
}

LocalizedHausdorff localized_hausdorff_estimate(const ConvexSet& a, const ConvexSet& b,
                                                double rho, const SamplerConfig& cfg) {
  if (dim(a) != dim(b))
    throw DimensionError("localized_hausdorff_estimate: set dimensions differ");
  if (!(rho > 0.0)) throw DomainError("localized_hausdorff_estimate: rho must be positive");
  Rng rng(cfg.seed);
  const auto ab = localized_directed_sup(a, b, rho, rng, cfg);
  const auto ba = localized_directed_sup(b, a, rho, rng, cfg);
  if (!ab && !ba) return {0.0, true};
  return {std::max(ab.value_or(0.0), ba.value_or(0.0)), false};
}

}  // namespace qvi
