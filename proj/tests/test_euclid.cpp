#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paraconvex/euclid.hpp"

using namespace paraconvex;

namespace {

PointCloud cloud(std::vector<Point> pts) { return PointCloud(std::move(pts)); }

// Smallest radius over a fine lattice of candidate centers, refined twice.
double grid_search_meb(const std::vector<Point>& pts) {
  double best = 1e300;
  Point c0(0.5, 0.5);
  double span = 2.0;
  for (int level = 0; level < 3; ++level) {
    Point best_c = c0;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const Point c(c0[0] - span / 2 + span * i / n, c0[1] - span / 2 + span * j / n);
        double r = 0;
        for (const Point& p : pts) r = std::max(r, distance(c, p));
        if (r < best) {
          best = r;
          best_c = c;
        }
      }
    }
    c0 = best_c;
    span /= 40.0;
  }
  return best;
}

}  // namespace

TEST_CASE("dist_to_cloud") {
  CHECK(dist_to_cloud(Point(0, 0), cloud({Point(3, 4)})) == doctest::Approx(5.0));
  const PointCloud p = cloud({Point(0, 0), Point(2, 0)});
  CHECK(dist_to_cloud(Point(2, 0), p) == 0.0);
  CHECK(dist_to_cloud(Point(1, 0), p) == doctest::Approx(1.0));
}

TEST_CASE("hausdorff distance") {
  CHECK(hausdorff_distance(cloud({Point(0, 0)}), cloud({Point(0, 0)})) == 0.0);
  CHECK(hausdorff_distance(cloud({Point(0, 0)}), cloud({Point(3, 4)})) == doctest::Approx(5.0));
  CHECK(hausdorff_distance(cloud({Point(0, 0), Point(1, 0)}), cloud({Point(0, 0)})) == doctest::Approx(1.0));
  CHECK(directed_hausdorff(cloud({Point(0, 0)}), cloud({Point(0, 0), Point(1, 0)})) == 0.0);
}

TEST_CASE("members_in_ball uses the open ball") {
  const PointCloud p = cloud({Point(0, 0), Point(5, 0)});
  CHECK(members_in_ball(p, Ball(Point(0, 0), 1.0)) == std::vector<std::size_t>{0});
  CHECK(members_in_ball(p, Ball(Point(0, 0), 100.0)).size() == 2);
  CHECK(members_in_ball(cloud({Point(1, 0)}), Ball(Point(0, 0), 1.0)).empty());
}

TEST_CASE("project_to_hull") {
  const std::vector<Point> seg = {Point(1, 0), Point(0, 1)};
  const HullPoint h = project_to_hull(Point(0, 0), seg);
  CHECK(h.point[0] == doctest::Approx(0.5));
  CHECK(h.point[1] == doctest::Approx(0.5));
  CHECK(h.certified(seg));

  const std::vector<Point> single = {Point(2, 3)};
  CHECK(project_to_hull(Point(-1, 7), single).point == Point(2, 3));

  const std::vector<Point> tri = {Point(0, 0), Point(4, 0), Point(0, 4)};
  const HullPoint in = project_to_hull(Point(1, 1), tri);
  CHECK(distance(in.point, Point(1, 1)) < 1e-9);
  CHECK(in.certified(tri));
}

TEST_CASE("project_to_hull matches brute force on random sets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> s;
    for (int i = 0; i < 6; ++i) s.emplace_back(u(rng), u(rng));
    const Point q(3 * u(rng), 3 * u(rng));
    const HullPoint h = project_to_hull(q, s);
    // Oracle: minimum over all segments (the planar projection lies on an edge or inside).
    double best = 1e300;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        const Point d = s[j] - s[i];
        const double len2 = squared_norm(d);
        const double t = len2 > 0 ? std::clamp(dot(q - s[i], d) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, distance(q, s[i] + d * t));
      }
    }
    const auto hull = convex_hull_2d(s);
    std::vector<Point> poly;
    for (auto k : hull) poly.push_back(s[k]);
    if (in_convex_polygon(q, poly)) best = 0.0;
    CHECK(distance(q, h.point) == doctest::Approx(best).epsilon(1e-7));
    CHECK(h.certified(s, 1e-9));
  }
}

TEST_CASE("min_enclosing_ball") {
  const std::vector<Point> two = {Point(0, 0), Point(2, 0)};
  EnclosingBall b = min_enclosing_ball(two);
  CHECK(b.center[0] == doctest::Approx(1.0));
  CHECK(b.center[1] == doctest::Approx(0.0));
  CHECK(b.radius == doctest::Approx(1.0));

  const std::vector<Point> obtuse = {Point(0, 0), Point(2, 0), Point(1, 1)};
  b = min_enclosing_ball(obtuse);
  CHECK(b.center[0] == doctest::Approx(1.0));
  CHECK(b.center[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.radius == doctest::Approx(1.0));

  const std::vector<Point> equilateral = {Point(0, 0), Point(1, 0), Point(0.5, std::sqrt(3.0) / 2)};
  b = min_enclosing_ball(equilateral);
  const double oracle = grid_search_meb(equilateral);
  CHECK(b.radius == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(b.radius == doctest::Approx(0.57735).epsilon(1e-5));
}

TEST_CASE("point cloud validation") {
  CHECK_THROWS_AS(PointCloud({}), Error);
  CHECK_THROWS_AS(PointCloud({Point(0, 0), Point(0, 0)}), Error);
  CHECK_THROWS_AS(PointCloud({Point(0, 0), Point(1, 0, 0)}), Error);
  CHECK_THROWS_AS(PointCloud({Point(0, NAN)}), Error);
  const PointCloud d = PointCloud::deduplicated({Point(0, 0), Point(0, 0), Point(1, 0)});
  CHECK(d.size() == 2);
  CHECK(d.diameter() == doctest::Approx(1.0));
}

TEST_CASE("grid index agrees with a linear scan") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Point> pts;
  for (int i = 0; i < 3000; ++i) pts.emplace_back(u(rng), 0.1 * u(rng));
  const PointCloud p(pts);
  for (int trial = 0; trial < 200; ++trial) {
    const Point x(3 * u(rng), 3 * u(rng));
    double best = 1e300;
    for (const Point& q : pts) best = std::min(best, distance(x, q));
    CHECK(dist_to_cloud(x, p) == best);
    const Ball ball(x, std::abs(u(rng)));
    std::vector<std::size_t> expect;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (ball.contains(pts[k])) expect.push_back(k);
    }
    CHECK(members_in_ball(p, ball) == expect);
  }
}
