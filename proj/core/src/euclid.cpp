#include "paraconvex/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace paraconvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::empty_intersection: return "empty_intersection";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::precondition_failed: return "precondition_failed";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Point Point::from_span(std::span<const double> coords) {
  if (coords.size() == 2) return {coords[0], coords[1]};
  if (coords.size() == 3) return {coords[0], coords[1], coords[2]};
  throw Error(ErrorKind::invalid_argument,
              "point must have 2 or 3 coordinates, got " + std::to_string(coords.size()));
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < dim_; ++i) os << (i ? ", " : "") << c_[i];
  os << ')';
  return os.str();
}

void require_same_dim(const Point& a, std::size_t dim, const char* what) {
  if (a.dim() != dim) {
    throw Error(ErrorKind::dimension_mismatch, std::string(what) + ": point of dimension " +
                                                   std::to_string(a.dim()) + " vs cloud of dimension " +
                                                   std::to_string(dim));
  }
}

// ---------------------------------------------------------------------------
// Ball, BoundingBox

Ball::Ball(Point c, double r) : center(c), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::invalid_argument, "ball radius must be positive and finite");
  }
  if (!c.is_finite()) throw Error(ErrorKind::invalid_argument, "ball center must be finite");
}

bool BoundingBox::contains(const Point& p, double slack) const noexcept {
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
  }
  return true;
}

BoundingBox BoundingBox::inflated(double factor) const {
  const Point c = center();
  double max_half = 0.0;
  for (std::size_t i = 0; i < lo.dim(); ++i) max_half = std::max(max_half, 0.5 * (hi[i] - lo[i]));
  if (max_half == 0.0) max_half = 1.0;
  BoundingBox out{lo, hi};
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    const double half = std::max(0.5 * (hi[i] - lo[i]), 0.5 * max_half) * factor;
    out.lo[i] = c[i] - half;
    out.hi[i] = c[i] + half;
  }
  return out;
}

BoundingBox BoundingBox::merged(const BoundingBox& other) const {
  BoundingBox out{lo, hi};
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    out.lo[i] = std::min(lo[i], other.lo[i]);
    out.hi[i] = std::max(hi[i], other.hi[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(std::span<const Point> points, std::size_t dim) : points_(points), dim_(dim) {
  const std::size_t n = points.size();
  Point lo = points[0];
  Point hi = points[0];
  for (const Point& p : points) {
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  double max_ext = 0.0;
  for (std::size_t i = 0; i < dim; ++i) max_ext = std::max(max_ext, hi[i] - lo[i]);
  if (max_ext == 0.0) max_ext = 1.0;
  double volume = 1.0;
  for (std::size_t i = 0; i < dim; ++i) volume *= std::max(hi[i] - lo[i], 1e-3 * max_ext);
  cell_ = std::pow(2.0 * volume / static_cast<double>(n), 1.0 / static_cast<double>(dim));
  cell_ = std::max(cell_, 1e-9 * max_ext);
  origin_ = lo;
  for (std::size_t i = 0; i < 3; ++i) {
    span_[i] = i < dim ? static_cast<long long>(std::floor((hi[i] - lo[i]) / cell_)) + 1 : 1;
  }

  std::vector<long long> keys(n);
  for (std::size_t k = 0; k < n; ++k) {
    long long c[3];
    cell_of(points[k], c);
    keys[k] = cell_key(c);
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin;
    const long long key = keys[order_[begin]];
    while (end < n && keys[order_[end]] == key) ++end;
    cells_.push_back({key, CellRange{begin, end}});
    begin = end;
  }
}

void GridIndex::cell_of(const Point& p, long long c[3]) const noexcept {
  for (std::size_t i = 0; i < 3; ++i) {
    if (i >= dim_) {
      c[i] = 0;
      continue;
    }
    const double v = std::floor((p[i] - origin_[i]) / cell_);
    c[i] = static_cast<long long>(std::clamp(v, -1e15, 1e15));
  }
}

long long GridIndex::cell_key(const long long c[3]) const noexcept {
  return c[0] + span_[0] * (c[1] + span_[1] * c[2]);
}

const GridIndex::CellRange* GridIndex::find_cell(long long key) const noexcept {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                             [](const auto& entry, long long k) { return entry.first < k; });
  if (it == cells_.end() || it->first != key) return nullptr;
  return &it->second;
}

GridIndex::Nearest GridIndex::nearest(const Point& x) const {
  const std::size_t n = points_.size();
  auto brute = [&]() {
    Nearest best{0, kInf};
    double best_sq = kInf;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = squared_distance(x, points_[k]);
      if (d < best_sq) {
        best_sq = d;
        best.index = k;
      }
    }
    best.distance = std::sqrt(best_sq);
    return best;
  };

  long long c[3];
  cell_of(x, c);
  // Distance from x to the grid box; rings closer than this hold nothing.
  double outside_sq = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double lo = origin_[i];
    const double hi = origin_[i] + static_cast<double>(span_[i]) * cell_;
    if (x[i] < lo) outside_sq += (lo - x[i]) * (lo - x[i]);
    if (x[i] > hi) outside_sq += (x[i] - hi) * (x[i] - hi);
  }
  const double outside = std::sqrt(outside_sq);
  // Start at the first ring that can reach the grid: a cell at Chebyshev
  // ring k lies within (k + 1) * sqrt(d) * cell of x.
  long long ring = static_cast<long long>(
      std::floor(outside / (cell_ * std::sqrt(static_cast<double>(dim_)))));
  ring = std::max(ring - 1, 0LL);

  long long max_ring = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    max_ring = std::max({max_ring, std::llabs(c[i]), std::llabs(span_[i] - 1 - c[i])});
  }

  double best_sq = kInf;
  std::size_t best_idx = 0;
  std::size_t visited = 0;
  const std::size_t budget = 4 * n + 64;
  auto scan_cell = [&](long long cx, long long cy, long long cz) {
    if (cx < 0 || cy < 0 || cz < 0 || cx >= span_[0] || cy >= span_[1] || cz >= span_[2]) return;
    ++visited;
    const long long cc[3] = {cx, cy, cz};
    const CellRange* range = find_cell(cell_key(cc));
    if (!range) return;
    for (std::size_t k = range->begin; k < range->end; ++k) {
      const std::size_t idx = order_[k];
      const double d = squared_distance(x, points_[idx]);
      if (d < best_sq || (d == best_sq && idx < best_idx)) {
        best_sq = d;
        best_idx = idx;
      }
    }
  };
  for (; ring <= max_ring; ++ring) {
    const long long zlo = dim_ == 3 ? c[2] - ring : 0;
    const long long zhi = dim_ == 3 ? c[2] + ring : 0;
    for (long long cz = std::max(zlo, 0LL); cz <= std::min(zhi, span_[2] - 1); ++cz) {
      const bool z_face = dim_ == 3 && (cz == zlo || cz == zhi);
      for (long long cy = std::max(c[1] - ring, 0LL); cy <= std::min(c[1] + ring, span_[1] - 1); ++cy) {
        const bool y_face = cy == c[1] - ring || cy == c[1] + ring;
        if (z_face || y_face) {
          for (long long cx = std::max(c[0] - ring, 0LL); cx <= std::min(c[0] + ring, span_[0] - 1); ++cx) {
            scan_cell(cx, cy, cz);
          }
        } else {
          scan_cell(c[0] - ring, cy, cz);
          if (ring > 0) scan_cell(c[0] + ring, cy, cz);
        }
      }
    }
    if (visited > budget) return brute();
    if (best_sq < kInf) {
      // Cells on ring + 1 lie at least `ring * cell_` away from x.
      const double reach = static_cast<double>(ring) * cell_;
      if (best_sq <= reach * reach) break;
    }
  }
  if (best_sq == kInf) return brute();
  return {best_idx, std::sqrt(best_sq)};
}

void GridIndex::within(const Ball& ball, std::vector<std::size_t>& out) const {
  out.clear();
  const std::size_t n = points_.size();
  const double r2 = ball.radius * ball.radius;
  long long lo[3];
  long long hi[3];
  double cells = 1.0;
  bool empty = false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i >= dim_) {
      lo[i] = hi[i] = 0;
      continue;
    }
    const double a = std::floor((ball.center[i] - ball.radius - origin_[i]) / cell_);
    const double b = std::floor((ball.center[i] + ball.radius - origin_[i]) / cell_);
    lo[i] = static_cast<long long>(std::max(a, 0.0));
    hi[i] = static_cast<long long>(std::min(b, static_cast<double>(span_[i] - 1)));
    if (hi[i] < lo[i]) empty = true;
    cells *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (empty) return;
  if (8.0 * cells > static_cast<double>(n)) {
    for (std::size_t k = 0; k < n; ++k) {
      if (squared_distance(points_[k], ball.center) < r2) out.push_back(k);
    }
    return;
  }
  for (long long cz = lo[2]; cz <= hi[2]; ++cz) {
    for (long long cy = lo[1]; cy <= hi[1]; ++cy) {
      for (long long cx = lo[0]; cx <= hi[0]; ++cx) {
        const long long cc[3] = {cx, cy, cz};
        const CellRange* range = find_cell(cell_key(cc));
        if (!range) continue;
        for (std::size_t k = range->begin; k < range->end; ++k) {
          const std::size_t idx = order_[k];
          if (squared_distance(points_[idx], ball.center) < r2) out.push_back(idx);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
}

bool GridIndex::nearest_within(const Point& x, const Ball& ball, Nearest& out) const {
  std::vector<std::size_t> members;
  within(ball, members);
  if (members.empty()) return false;
  double best = kInf;
  for (std::size_t idx : members) {
    const double d = squared_distance(x, points_[idx]);
    if (d < best) {
      best = d;
      out.index = idx;
    }
  }
  out.distance = std::sqrt(best);
  return true;
}

// ---------------------------------------------------------------------------
// PointCloud

struct PointCloud::Data {
  std::vector<Point> points;
  std::string label;
  std::size_t dim = 0;
  BoundingBox bounds;
  double diameter = 0.0;
  std::unique_ptr<GridIndex> index;
  mutable std::once_flag resolution_once;
  mutable double resolution = 0.0;
};

namespace {

void validate_points(const std::vector<Point>& points) {
  if (points.empty()) throw Error(ErrorKind::invalid_argument, "point cloud must be nonempty");
  const std::size_t dim = points.front().dim();
  if (dim != 2 && dim != 3) {
    throw Error(ErrorKind::invalid_argument, "point cloud dimension must be 2 or 3");
  }
  for (const Point& p : points) {
    if (p.dim() != dim) {
      throw Error(ErrorKind::dimension_mismatch, "point cloud mixes dimensions");
    }
    if (!p.is_finite()) throw Error(ErrorKind::invalid_argument, "point cloud has a non-finite coordinate");
  }
}

}  // namespace

PointCloud::PointCloud(std::vector<Point> points, std::string label, double tau_dup) {
  validate_points(points);
  auto data = std::make_shared<Data>();
  data->points = std::move(points);
  data->label = std::move(label);
  data->dim = data->points.front().dim();
  data->bounds = {data->points.front(), data->points.front()};
  for (const Point& p : data->points) {
    for (std::size_t i = 0; i < data->dim; ++i) {
      data->bounds.lo[i] = std::min(data->bounds.lo[i], p[i]);
      data->bounds.hi[i] = std::max(data->bounds.hi[i], p[i]);
    }
  }
  data->index = std::make_unique<GridIndex>(std::span<const Point>(data->points), data->dim);

  std::vector<std::size_t> near;
  for (std::size_t k = 0; k < data->points.size(); ++k) {
    data->index->within(Ball(data->points[k], std::max(tau_dup, 1e-300)), near);
    if (near.size() > 1) {
      throw Error(ErrorKind::invalid_argument,
                  "point cloud '" + data->label + "' has duplicate points within tau_dup at " +
                      data->points[k].to_string(),
                  data->points[k]);
    }
  }
  data->diameter = max_pairwise_distance(data->points);
  data_ = std::move(data);
  pts_ = data_->points.data();
}

PointCloud PointCloud::deduplicated(std::vector<Point> points, std::string label, double tau_dup) {
  validate_points(points);
  std::vector<Point> kept;
  kept.reserve(points.size());
  {
    // Index over everything, keep a point only if no earlier kept point is near.
    const GridIndex index(points, points.front().dim());
    std::vector<char> dropped(points.size(), 0);
    std::vector<std::size_t> near;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (dropped[k]) continue;
      index.within(Ball(points[k], std::max(tau_dup, 1e-300)), near);
      for (std::size_t j : near) {
        if (j > k) dropped[j] = 1;
      }
      kept.push_back(points[k]);
    }
  }
  return PointCloud(std::move(kept), std::move(label), tau_dup);
}

std::size_t PointCloud::size() const noexcept { return data_->points.size(); }
std::size_t PointCloud::dim() const noexcept { return data_->dim; }
const std::string& PointCloud::label() const noexcept { return data_->label; }
const std::vector<Point>& PointCloud::points() const noexcept { return data_->points; }
const BoundingBox& PointCloud::bounds() const noexcept { return data_->bounds; }
double PointCloud::diameter() const noexcept { return data_->diameter; }
const GridIndex& PointCloud::index() const noexcept { return *data_->index; }

double PointCloud::resolution() const noexcept {
  std::call_once(data_->resolution_once, [this]() {
    const auto& pts = data_->points;
    if (pts.size() < 2) {
      data_->resolution = 0.0;
      return;
    }
    double worst = 0.0;
    std::vector<std::size_t> near;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      // Grow a ball around p until it holds another point.
      double r = data_->diameter / std::sqrt(static_cast<double>(pts.size())) + 1e-300;
      double best = kInf;
      for (;;) {
        data_->index->within(Ball(pts[k], r), near);
        for (std::size_t j : near) {
          if (j != k) best = std::min(best, distance(pts[k], pts[j]));
        }
        if (best < kInf) break;
        r *= 2.0;
      }
      worst = std::max(worst, best);
    }
    data_->resolution = worst;
  });
  return data_->resolution;
}

PointCloud PointCloud::relabeled(std::string label) const {
  PointCloud copy = *this;
  auto data = std::make_shared<Data>();
  data->points = data_->points;
  data->label = std::move(label);
  data->dim = data_->dim;
  data->bounds = data_->bounds;
  data->diameter = data_->diameter;
  data->index = std::make_unique<GridIndex>(std::span<const Point>(data->points), data->dim);
  copy.data_ = std::move(data);
  copy.pts_ = copy.data_->points.data();
  return copy;
}

// ---------------------------------------------------------------------------
// Distances

GridIndex::Nearest nearest_in_cloud(const Point& x, const PointCloud& cloud) {
  require_same_dim(x, cloud.dim(), "nearest_in_cloud");
  return cloud.index().nearest(x);
}

double dist_to_cloud(const Point& x, const PointCloud& cloud) {
  return nearest_in_cloud(x, cloud).distance;
}

double dist_to_cloud_in_ball(const Point& x, const PointCloud& cloud, const Ball& ball) {
  require_same_dim(x, cloud.dim(), "dist_to_cloud_in_ball");
  GridIndex::Nearest hit;
  if (!cloud.index().nearest_within(x, ball, hit)) return kInf;
  return hit.distance;
}

bool in_cloud(const Point& x, const PointCloud& cloud, double tau_dup) {
  return dist_to_cloud(x, cloud) <= tau_dup;
}

double directed_hausdorff(const PointCloud& from, const PointCloud& to) {
  if (from.dim() != to.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "hausdorff_distance: clouds differ in dimension");
  }
  double worst = 0.0;
  for (const Point& p : from.points()) worst = std::max(worst, to.index().nearest(p).distance);
  return worst;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<std::size_t> members_in_ball(const PointCloud& cloud, const Ball& ball) {
  std::vector<std::size_t> out;
  members_in_ball(cloud, ball, out);
  return out;
}

void members_in_ball(const PointCloud& cloud, const Ball& ball, std::vector<std::size_t>& out) {
  require_same_dim(ball.center, cloud.dim(), "members_in_ball");
  cloud.index().within(ball, out);
}

// ---------------------------------------------------------------------------
// Hull points

bool HullPoint::certified(std::span<const Point> s, double tol) const {
  double sum = 0.0;
  Point combo = Point::zero(point.dim());
  for (const auto& [idx, w] : support) {
    if (idx >= s.size() || w < -tol) return false;
    sum += w;
    combo += s[idx] * w;
  }
  if (std::abs(sum - 1.0) > tol) return false;
  double scale = 1.0;
  for (const auto& [idx, w] : support) scale = std::max(scale, norm(s[idx]));
  return distance(combo, point) <= tol * scale * 10.0;
}

namespace {

// Affine minimizer of |sum a_i y_i| subject to sum a_i = 1 over the active set.
Eigen::VectorXd affine_minimizer(const std::vector<Point>& y, const std::vector<std::size_t>& active,
                                 std::size_t dim) {
  const auto m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < dim; ++k) g += y[active[i]][k] * y[active[j]][k];
      kkt(i, j) = g;
    }
    kkt(i, m) = 1.0;
    kkt(m, i) = 1.0;
  }
  rhs(m) = 1.0;
  Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(m);
}

}  // namespace

HullPoint project_to_hull(const Point& q, std::span<const Point> s, double tau_proj, int max_iterations) {
  if (s.empty()) throw Error(ErrorKind::invalid_argument, "project_to_hull: empty set");
  const std::size_t dim = q.dim();
  for (const Point& p : s) require_same_dim(p, dim, "project_to_hull");

  std::vector<Point> y(s.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    y[i] = s[i] - q;
    scale = std::max(scale, squared_norm(y[i]));
  }
  if (scale == 0.0) scale = 1.0;

  // Start from the closest generator, lowest index on ties.
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (squared_norm(y[i]) < squared_norm(y[start])) start = i;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Point x = y[start];

  for (int iter = 0; iter < max_iterations; ++iter) {
    std::size_t j = 0;
    double best = dot(x, y[0]);
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double v = dot(x, y[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    const double gap = squared_norm(x) - best;
    if (gap <= tau_proj * tau_proj * scale || gap <= 1e-15 * scale ||
        std::find(active.begin(), active.end(), j) != active.end()) {
      HullPoint out;
      out.point = q + x;
      for (std::size_t k = 0; k < active.size(); ++k) out.support.emplace_back(active[k], lambda[k]);
      std::sort(out.support.begin(), out.support.end());
      return out;
    }
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < max_iterations; ++minor) {
      const Eigen::VectorXd alpha = affine_minimizer(y, active, dim);
      const double eps = 1e-14;
      bool interior = true;
      for (Eigen::Index k = 0; k < alpha.size(); ++k) interior = interior && alpha(k) > eps;
      if (interior) {
        for (std::size_t k = 0; k < active.size(); ++k) lambda[k] = alpha(static_cast<Eigen::Index>(k));
        break;
      }
      double theta = 1.0;
      for (std::size_t k = 0; k < active.size(); ++k) {
        const double a = alpha(static_cast<Eigen::Index>(k));
        if (a <= eps && lambda[k] - a > 0.0) theta = std::min(theta, lambda[k] / (lambda[k] - a));
      }
      for (std::size_t k = 0; k < active.size(); ++k) {
        lambda[k] = lambda[k] + theta * (alpha(static_cast<Eigen::Index>(k)) - lambda[k]);
      }
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (lambda[k] > eps) {
          keep_idx.push_back(active[k]);
          keep_lambda.push_back(lambda[k]);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(active.back());
        keep_lambda.push_back(1.0);
      }
      active = std::move(keep_idx);
      lambda = std::move(keep_lambda);
    }
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    x = Point::zero(dim);
    for (std::size_t k = 0; k < active.size(); ++k) {
      lambda[k] /= total;
      x += y[active[k]] * lambda[k];
    }
  }
  throw Error(ErrorKind::non_convergence, "project_to_hull: iteration budget exhausted", q);
}

// ---------------------------------------------------------------------------
// Minimum enclosing ball

namespace {

struct Sphere {
  Point center;
  double radius_sq = -1.0;  // negative: empty ball
};

// Smallest sphere through all boundary points (circumsphere in their affine hull).
Sphere circumsphere(const std::vector<Point>& boundary) {
  Sphere out;
  if (boundary.empty()) return out;
  const Point& p0 = boundary.front();
  out.center = p0;
  out.radius_sq = 0.0;
  const auto m = static_cast<Eigen::Index>(boundary.size() - 1);
  if (m == 0) return out;
  const std::size_t dim = p0.dim();
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point vi = boundary[static_cast<std::size_t>(i) + 1] - p0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Point vj = boundary[static_cast<std::size_t>(j) + 1] - p0;
      a(i, j) = 2.0 * dot(vi, vj);
    }
    b(i) = squared_norm(vi);
  }
  const Eigen::VectorXd lam = a.completeOrthogonalDecomposition().solve(b);
  Point c = p0;
  for (Eigen::Index i = 0; i < m; ++i) c += (boundary[static_cast<std::size_t>(i) + 1] - p0) * lam(i);
  (void)dim;
  out.center = c;
  for (const Point& p : boundary) out.radius_sq = std::max(out.radius_sq, squared_distance(p, c));
  return out;
}

class MoveToFrontBall {
 public:
  explicit MoveToFrontBall(std::span<const Point> pts) : dim_(pts.front().dim()) {
    for (std::size_t i = 0; i < pts.size(); ++i) order_.push_back(i);
    pts_ = pts;
  }

  EnclosingBall solve() {
    std::vector<std::size_t> boundary;
    mtf(order_.size(), boundary);
    EnclosingBall out;
    out.center = best_.center;
    out.radius = std::sqrt(std::max(best_.radius_sq, 0.0));
    out.support = best_support_;
    std::sort(out.support.begin(), out.support.end());
    return out;
  }

 private:
  void set_ball(const std::vector<std::size_t>& boundary) {
    std::vector<Point> pts;
    for (std::size_t idx : boundary) pts.push_back(pts_[idx]);
    best_ = circumsphere(pts);
    best_support_ = boundary;
  }

  bool outside(std::size_t idx) const {
    if (best_.radius_sq < 0.0) return true;
    const double r = std::sqrt(best_.radius_sq);
    const double d = distance(pts_[idx], best_.center);
    return d > r + 1e-12 * std::max(1.0, r);
  }

  void mtf(std::size_t end, std::vector<std::size_t>& boundary) {
    set_ball(boundary);
    if (boundary.size() == dim_ + 1) return;
    for (std::size_t pos = 0; pos < end; ++pos) {
      const std::size_t idx = order_[pos];
      if (!outside(idx)) continue;
      boundary.push_back(idx);
      mtf(pos, boundary);
      boundary.pop_back();
      // Move the violator to the front so later passes see it early.
      std::rotate(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(pos),
                  order_.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
    }
  }

  std::size_t dim_;
  std::span<const Point> pts_;
  std::vector<std::size_t> order_;
  Sphere best_;
  std::vector<std::size_t> best_support_;
};

}  // namespace

EnclosingBall min_enclosing_ball(std::span<const Point> s) {
  if (s.empty()) throw Error(ErrorKind::invalid_argument, "min_enclosing_ball: empty set");
  for (const Point& p : s) require_same_dim(p, s.front().dim(), "min_enclosing_ball");
  MoveToFrontBall solver(s);
  EnclosingBall ball = solver.solve();
  // Drop boundary points that ended up strictly inside (degenerate ties).
  std::vector<std::size_t> support;
  for (std::size_t idx : ball.support) {
    if (std::abs(distance(s[idx], ball.center) - ball.radius) <= 1e-9 * std::max(1.0, ball.radius)) {
      support.push_back(idx);
    }
  }
  ball.support = std::move(support);
  return ball;
}

// ---------------------------------------------------------------------------
// Planar hulls

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

std::vector<std::size_t> convex_hull_2d(std::span<const Point> pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    if (pts[a][1] != pts[b][1]) return pts[a][1] < pts[b][1];
    return a < b;
  });
  // Collapse exact duplicates.
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
            idx.end());
  if (idx.size() <= 2) return idx;
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i : idx) {
    while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (std::size_t j = idx.size() - 1; j-- > 0;) {
    const std::size_t i = idx[j];
    while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

bool in_convex_polygon(const Point& q, std::span<const Point> polygon, double tol) {
  const std::size_t m = polygon.size();
  if (m == 0) return false;
  if (m == 1) return distance(q, polygon[0]) <= tol;
  if (m == 2) {
    const Point ab = polygon[1] - polygon[0];
    const double len2 = squared_norm(ab);
    const double t = std::clamp(dot(q - polygon[0], ab) / len2, 0.0, 1.0);
    return distance(q, polygon[0] + ab * t) <= tol;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % m];
    const double len = distance(a, b);
    if (cross(a, b, q) < -tol * len) return false;
  }
  return true;
}

double max_pairwise_distance(std::span<const Point> pts) {
  if (pts.size() < 2) return 0.0;
  double best = 0.0;
  if (pts.front().dim() == 2 && pts.size() > 64) {
    const auto hull = convex_hull_2d(pts);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      for (std::size_t j = i + 1; j < hull.size(); ++j) {
        best = std::max(best, squared_distance(pts[hull[i]], pts[hull[j]]));
      }
    }
    return std::sqrt(best);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, squared_distance(pts[i], pts[j]));
  }
  return std::sqrt(best);
}

}  // namespace paraconvex
