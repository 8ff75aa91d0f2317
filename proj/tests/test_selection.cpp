#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/scenes.hpp"
#include "paraconvex/selection.hpp"

using namespace paraconvex;

namespace {

PointCloud segment(std::size_t n) {
  Scene s = resolve_scene("segment");
  s.density = n;
  return generate_scene(s);
}

PointCloud semicircle() { return generate_scene(resolve_scene("semicircle")); }

double semicircle_alpha() {
  const PointCloud p = semicircle();
  return nonconvexity_function(p, default_plan(p)).max_alpha();
}

}  // namespace

TEST_CASE("bary_select") {
  const PointCloud p({Point(0, 0), Point(5, 0)});
  const HullPoint one = bary_select(p, Ball(Point(0.2, 0.1), 1.0));
  CHECK(one.point == Point(0, 0));
  REQUIRE(one.support.size() == 1);
  CHECK(one.support[0].second == 1.0);

  const PointCloud sym({Point(-0.5, 0), Point(0.5, 0)});
  const HullPoint mid = bary_select(sym, Ball(Point(0, 0), 1.0));
  CHECK(std::abs(mid.point[0]) < 1e-15);
  CHECK(std::abs(mid.point[1]) < 1e-15);

  CHECK_THROWS_AS(bary_select(p, Ball(Point(2.5, 3), 1.0)), Error);
  CHECK_THROWS_AS(bary_select(p, Ball(Point(0, 0), 1.0), 0.0), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 300; ++i) pts.emplace_back(u(rng), u(rng));
  const PointCloud cloud(pts);
  for (int t = 0; t < 100; ++t) {
    const Ball b(Point(u(rng), u(rng)), 0.2 + std::abs(u(rng)));
    for (double kappa : {1.0, 2.0, 3.5}) {
      const HullPoint h = bary_select(cloud, b, kappa);
      CHECK(h.certified(cloud.points()));
      for (const auto& [idx, w] : h.support) CHECK(b.contains(cloud[idx]));
    }
    const Ball b2(b.center + Point(0.1, 0.0), b.radius);
    const HullPoint h2 = bary_select(cloud, b, b2);
    CHECK(h2.certified(cloud.points()));
    for (const auto& [idx, w] : h2.support) CHECK((b.contains(cloud[idx]) && b2.contains(cloud[idx])));
  }
}

TEST_CASE("bary_select is continuous in the center") {
  const PointCloud p = semicircle();
  Point prev = bary_select(p, Ball(Point(0.0, 0.5), 0.7)).point;
  for (int k = 1; k <= 100; ++k) {
    const Point next = bary_select(p, Ball(Point(1e-4 * k, 0.5), 0.7)).point;
    CHECK(distance(prev, next) < 1e-3);
    prev = next;
  }
}

TEST_CASE("iteration cap") {
  CHECK(iteration_cap(0.5, 1e-8) == 200);
  const std::size_t cap = iteration_cap(0.99, 1e-8);
  CHECK(std::pow(0.99, static_cast<double>(cap)) < 1e-8);
  CHECK(banach_schedule(0.9).effective_n_max() >= 200);
}

TEST_CASE("iterate_to_member") {
  SUBCASE("start on P") {
    const PointCloud p = semicircle();
    const IterationResult r = iterate_to_member(p, p[7], 0.3, banach_schedule(0.99));
    CHECK(r.point == p[7]);
    CHECK(r.index == 7);
    CHECK(r.trace.step_norms.empty());
  }
  SUBCASE("dense segment, banach bound") {
    const PointCloud p = segment(400);
    const double beta = 0.3;
    const Point x(0.123, 0.4);
    const double d = dist_to_cloud(x, p);
    const IterationResult r = iterate_to_member(p, x, 2 * d, banach_schedule(beta));
    CHECK(dist_to_cloud(r.point, p) == 0.0);
    CHECK(distance(x, r.point) <= 2 * d / (1 - beta) + 1e-8);
    CHECK(std::abs(r.point[1]) < 1e-12);
  }
  SUBCASE("semicircle from the center") {
    const PointCloud p = semicircle();
    const double beta = semicircle_alpha() + 0.05;
    const Point x(0, 0);
    const double d = dist_to_cloud(x, p);
    const IterationResult r = iterate_to_member(p, x, 2 * d, banach_schedule(beta));
    CHECK(dist_to_cloud(r.point, p) == 0.0);
    const auto& tr = r.trace;
    double radius = tr.initial_radius;
    for (std::size_t n = 0; n < tr.step_norms.size(); ++n) {
      CHECK(tr.step_norms[n] <= radius * (1.0 + 1e-6));
      if (n + 1 < tr.radii.size()) CHECK(tr.radii[n + 1] <= beta * tr.radii[n] * (1 + 1e-6));
      radius *= beta;
    }
    CHECK(distance(x, r.point) <= 2 * d / (1 - beta) * (1 + 1e-3));
  }
  SUBCASE("empty first ball") {
    const PointCloud p = segment(50);
    CHECK_THROWS_AS(iterate_to_member(p, Point(0, 3), 1.0, banach_schedule(0.5)), Error);
  }
  SUBCASE("hilbert mode stays inside C times the radius") {
    const PointCloud p = semicircle();
    const double alpha = semicircle_alpha();
    const double C = hilbert_constant_floor(alpha) + 0.05;
    const double gamma = hilbert_gamma_for(alpha, C);
    const Point x(0.1, 0.3);
    const double eps = 1.5 * dist_to_cloud(x, p);
    const IterationResult r = iterate_to_member(p, x, eps, hilbert_schedule(gamma, C));
    CHECK(dist_to_cloud(r.point, p) == 0.0);
    CHECK(distance(x, r.point) < C * eps);
    CHECK(r.trace.lambda < 1 - 1 / C);
  }
}

TEST_CASE("schedules validate their parameters") {
  CHECK_THROWS_AS(banach_schedule(1.0).validate(), Error);
  CHECK_THROWS_AS(hilbert_schedule(0.5, 1.5).validate(), Error);
  CHECK_NOTHROW(hilbert_schedule(0.5, 1.7).validate());
  CHECK_THROWS_AS(hilbert_gamma_for(0.9, 2.0), Error);
  const double g = hilbert_gamma_for(0.3, 2.0);
  CHECK(g > 0.3);
  CHECK(hilbert_constant_floor(g) < 2.0);
}

TEST_CASE("improve_epsilon_selection") {
  const PointCloud seg = segment(200);
  std::vector<Point> grid;
  for (int i = 0; i < 9; ++i) grid.emplace_back(-0.8 + 0.2 * i, 0.0);
  SetValuedMap constant_segment{grid, [seg](const Point&) { return seg; }, "segment"};

  SUBCASE("already a selection") {
    std::vector<Point> f;
    for (const Point& x : grid) f.push_back(seg[seg.index().nearest(x).index]);
    const ImprovedSelection s = improve_epsilon_selection(constant_segment, f, 0.1, 0.0, banach_schedule(0.2));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(distance(s.values[i], f[i]) <= 1e-12);
  }
  SUBCASE("offset by eps over a convex value") {
    const double eps = 0.05;
    std::vector<Point> f;
    for (const Point& x : grid) f.push_back(x + Point(0, 0.9 * eps));
    const ImprovedSelection s = improve_epsilon_selection(constant_segment, f, eps, 0.0, banach_schedule(0.01));
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(dist_to_cloud(s.values[i], seg) == 0.0);
      CHECK(distance(s.values[i], f[i]) <= eps / (1 - 0.01) + 1e-8);
    }
  }
  SUBCASE("not an eps-selection") {
    std::vector<Point> f(grid.size(), Point(0, 1));
    CHECK_THROWS_AS(improve_epsilon_selection(constant_segment, f, 0.1, 0.0, banach_schedule(0.2)), Error);
  }
  SUBCASE("hilbert mode on the semicircle") {
    const PointCloud semi = semicircle();
    const double alpha = semicircle_alpha();
    const double C = hilbert_constant_floor(alpha) + 0.05;
    const IterationSchedule sch = hilbert_schedule(hilbert_gamma_for(alpha, C), C);
    std::vector<Point> xs, f;
    const double eps = 0.05;
    for (int i = 0; i < 12; ++i) {
      const double a = 0.2 + 0.22 * i;
      xs.emplace_back(std::cos(a), std::sin(a));
      f.push_back(Point(std::cos(a), std::sin(a)) * (1 - 0.8 * eps));
    }
    SetValuedMap m{xs, [semi](const Point&) { return semi; }, "semicircle"};
    const ImprovedSelection s = improve_epsilon_selection(m, f, eps, alpha, sch);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(dist_to_cloud(s.values[i], semi) == 0.0);
      CHECK(distance(s.values[i], f[i]) / eps <= C);
    }
  }
  SUBCASE("schedule must dominate alpha") {
    std::vector<Point> f;
    for (const Point& x : grid) f.push_back(x);
    CHECK_THROWS_AS(improve_epsilon_selection(constant_segment, f, 0.1, 0.5, banach_schedule(0.4)), Error);
  }
}
