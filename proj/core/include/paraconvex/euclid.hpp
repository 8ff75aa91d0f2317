#pragma once

// Geometric kernels shared by every construction in the library: distances to
// finite clouds, open-ball membership, nearest points of convex hulls,
// Chebyshev balls and the Hausdorff metric.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paraconvex/error.hpp"
#include "paraconvex/point.hpp"

namespace paraconvex {

/// Numerical tolerances. Every kernel takes the defaults; RunConfig may
/// override them for a whole experiment.
struct Tolerances {
  double dup = 1e-12;     // two points closer than this are the same point
  double geo = 1e-9;      // slack on geometric containment checks
  double proj = 1e-10;    // min-norm-point optimality gap
  double weight = 1e-12;  // barycentric weights: nonnegativity and sum
  double verdict = 1e-6;  // paraconvexity deficit accepted as "holds"
};

inline constexpr Tolerances kDefaultTolerances{};

/// Open ball D(center, radius).
struct Ball {
  Point center;
  double radius = 0.0;

  Ball() = default;
  Ball(Point c, double r);

  /// Strict: boundary points are outside.
  bool contains(const Point& p) const noexcept {
    return squared_distance(p, center) < radius * radius;
  }
};

struct BoundingBox {
  Point lo;
  Point hi;

  Point center() const { return (lo + hi) * 0.5; }
  bool contains(const Point& p, double slack = 0.0) const noexcept;
  double diagonal() const noexcept { return distance(lo, hi); }
  /// Half-extents scaled by `factor` about the center. Degenerate axes borrow
  /// half of the largest extent so a flat cloud still gets a 2-D box.
  BoundingBox inflated(double factor) const;
  BoundingBox merged(const BoundingBox& other) const;
};

class GridIndex;

/// Immutable finite point set with a cached spatial index. Copies share the
/// underlying storage.
class PointCloud {
 public:
  /// Throws `Error{invalid_argument}` when empty, non-finite, of mixed
  /// dimension (only 2 and 3 are accepted), or when two points coincide
  /// within `tau_dup`.
  explicit PointCloud(std::vector<Point> points, std::string label = {},
                      double tau_dup = kDefaultTolerances.dup);

  /// Drops later points that duplicate an earlier one within `tau_dup`.
  static PointCloud deduplicated(std::vector<Point> points, std::string label = {},
                                 double tau_dup = kDefaultTolerances.dup);

  std::size_t size() const noexcept;
  std::size_t dim() const noexcept;
  const std::string& label() const noexcept;
  const std::vector<Point>& points() const noexcept;
  const Point& operator[](std::size_t i) const noexcept { return pts_[i]; }
  const BoundingBox& bounds() const noexcept;
  /// Exact diameter (max pairwise distance).
  double diameter() const noexcept;
  /// Largest nearest-neighbour distance: the sampling resolution of the cloud.
  double resolution() const noexcept;
  const GridIndex& index() const noexcept;

  PointCloud relabeled(std::string label) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
  const Point* pts_ = nullptr;
};

/// Uniform-grid bucket index. Queries that would touch more cells than there
/// are points fall back to a linear scan.
class GridIndex {
 public:
  GridIndex(std::span<const Point> points, std::size_t dim);

  struct Nearest {
    std::size_t index = 0;
    double distance = 0.0;
  };
  Nearest nearest(const Point& x) const;
  /// Indices of points strictly inside the ball, ascending.
  void within(const Ball& ball, std::vector<std::size_t>& out) const;
  /// Nearest point among those strictly inside `ball`; false if none.
  bool nearest_within(const Point& x, const Ball& ball, Nearest& out) const;

 private:
  struct CellRange {
    std::size_t begin;
    std::size_t end;
  };
  long long cell_key(const long long c[3]) const noexcept;
  void cell_of(const Point& p, long long c[3]) const noexcept;
  const CellRange* find_cell(long long key) const noexcept;

  std::span<const Point> points_;
  std::size_t dim_;
  Point origin_;
  double cell_ = 1.0;
  std::vector<std::size_t> order_;
  std::vector<std::pair<long long, CellRange>> cells_;  // sorted by key
  long long span_[3] = {1, 1, 1};
};

/// Element of conv(S) with its barycentric certificate.
struct HullPoint {
  Point point;
  std::vector<std::pair<std::size_t, double>> support;  // (index into S, weight)

  /// Weights nonnegative, summing to one, and reproducing `point`.
  bool certified(std::span<const Point> s, double tol = kDefaultTolerances.weight) const;
};

/// Smallest closed ball containing a set: Chebyshev center and radius.
struct EnclosingBall {
  Point center;
  double radius = 0.0;
  std::vector<std::size_t> support;  // indices of boundary points, at most d+1
};

/// Euclidean distance from x to the nearest point of P.
double dist_to_cloud(const Point& x, const PointCloud& cloud);
GridIndex::Nearest nearest_in_cloud(const Point& x, const PointCloud& cloud);
/// dist(x, P ∩ D); +inf when the intersection is empty.
double dist_to_cloud_in_ball(const Point& x, const PointCloud& cloud, const Ball& ball);
bool in_cloud(const Point& x, const PointCloud& cloud, double tau_dup = kDefaultTolerances.dup);

double directed_hausdorff(const PointCloud& from, const PointCloud& to);
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

/// Indices of P strictly inside the open ball, in input order.
std::vector<std::size_t> members_in_ball(const PointCloud& cloud, const Ball& ball);
void members_in_ball(const PointCloud& cloud, const Ball& ball, std::vector<std::size_t>& out);

/// Nearest point of conv(S) to q by Wolfe's min-norm-point method. Ties in
/// the pricing step go to the lowest index. Throws `non_convergence` if the
/// iteration budget runs out.
HullPoint project_to_hull(const Point& q, std::span<const Point> s,
                          double tau_proj = kDefaultTolerances.proj, int max_iterations = 1000);

/// Move-to-front Welzl; deterministic for a given input order.
EnclosingBall min_enclosing_ball(std::span<const Point> s);

/// Counter-clockwise hull vertices of a planar set (indices into `pts`),
/// collinear points dropped. A set with one distinct point returns it alone.
std::vector<std::size_t> convex_hull_2d(std::span<const Point> pts);

/// Point-in-convex-polygon test for a CCW polygon, boundary included.
bool in_convex_polygon(const Point& q, std::span<const Point> polygon, double tol = 1e-12);

double max_pairwise_distance(std::span<const Point> pts);

void require_same_dim(const Point& a, std::size_t dim, const char* what);

}  // namespace paraconvex
