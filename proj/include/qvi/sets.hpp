#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "qvi/sampler.hpp"

namespace qvi {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Throws DomainError if any coordinate is NaN or infinite.
void require_finite(const Point& p, const char* what);
/// Throws DimensionError unless p.size() == expected.
void require_dim(Index expected, const Point& p, const char* what);

/// Axis-aligned box [lower, upper]. Degenerate (lower == upper) sides are allowed.
class Box {
 public:
  Box(Point lower, Point upper);

  static Box unit(Index n);

  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  Index dim() const { return lower_.size(); }
  Point center() const { return 0.5 * (lower_ + upper_); }

 private:
  Point lower_;
  Point upper_;
};

/// Closed segment between two endpoints; a == b is a single point.
class Segment {
 public:
  Segment(Point a, Point b);

  const Point& a() const { return a_; }
  const Point& b() const { return b_; }
  Index dim() const { return a_.size(); }

 private:
  Point a_;
  Point b_;
};

/// The closed half space {x : normal . x >= offset}.
struct Halfspace {
  Point normal;
  double offset = 0.0;
};

/// Intersection of an optional bounding box with finitely many half spaces.
///
/// Construction certifies nonemptiness by computing a feasible point and
/// throws DomainError when none exists. The stacked constraint system
/// `A v >= b` (box sides first, then half spaces) is cached for the
/// active-set projection.
class Polytope {
 public:
  Polytope(std::optional<Box> box, std::vector<Halfspace> halfspaces);

  Index dim() const { return dim_; }
  const std::optional<Box>& box() const { return box_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  /// A point certified feasible at construction.
  const Point& feasible_point() const { return feasible_; }

  const Matrix& constraint_matrix() const { return a_; }
  const Point& constraint_offsets() const { return b_; }

  /// Largest violation max_i (b_i - a_i . z), clamped at zero.
  double max_violation(const Point& z) const;

 private:
  Index dim_ = 0;
  std::optional<Box> box_;
  std::vector<Halfspace> halfspaces_;
  Matrix a_;
  Point b_;
  Point feasible_;
};

/// All of R^n.
class FullSpace {
 public:
  explicit FullSpace(Index n);
  Index dim() const { return dim_; }

 private:
  Index dim_;
};

using ConvexSet = std::variant<Box, Segment, Polytope, FullSpace>;

enum class PolytopeMethod { automatic, active_set, dykstra };

Point project_box(const Box& box, const Point& z);
Point project_segment(const Segment& seg, const Point& z);
Point project_halfspace(const Halfspace& h, const Point& z);

/// Euclidean projection onto a polytope.
///
/// `automatic` uses exact active-set enumeration when dim <= 3 (and the
/// subset count stays small) and Dykstra's alternating projections
/// otherwise. Dykstra stops once a full sweep moves the iterate by at most
/// 1e-12 and throws ConvergenceError after 1e5 sweeps.
Point project_polytope(const Polytope& poly, const Point& z,
                       PolytopeMethod method = PolytopeMethod::automatic);

Point project(const ConvexSet& set, const Point& z);
double distance(const Point& z, const ConvexSet& set);
Index dim(const ConvexSet& set);
bool contains(const ConvexSet& set, const Point& z, double tol = 1e-10);

/// A representative interior-ish point used to center probe distributions.
Point center(const ConvexSet& set);

/// Known extreme points: box corners (dim <= 12), segment endpoints and
/// polytope vertices (dim <= 3). Empty for the full space.
std::vector<Point> extreme_points(const ConvexSet& set);

/// Sampled lower bound on the Hausdorff distance between two sets.
///
/// Probe points of A are extreme points plus projections onto A of
/// Gaussian far-field draws; the estimate is the larger of the two directed
/// sup-distances over the probes.
double hausdorff_estimate(const ConvexSet& a, const ConvexSet& b,
                          const SamplerConfig& probes = {});

struct LocalizedHausdorff {
  double value = 0.0;
  /// Both A and B miss the radius-rho ball; value is reported as 0.
  bool empty = false;
};

/// Sampled lower bound on the rho-localized Hausdorff distance, where the
/// directed sup runs only over probe points inside the closed ball of
/// radius rho about the origin.
LocalizedHausdorff localized_hausdorff_estimate(const ConvexSet& a,
                                                const ConvexSet& b, double rho,
                                                const SamplerConfig& probes = {});

}  // namespace qvi
