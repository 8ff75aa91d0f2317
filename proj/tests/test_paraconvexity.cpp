#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/scenes.hpp"

using namespace paraconvex;

namespace {

PointCloud two_points() { return PointCloud({Point(-1, 0), Point(1, 0)}); }

PointCloud semicircle() { return generate_scene(resolve_scene("semicircle")); }

SamplingPlan plan_with(const PointCloud& p, std::vector<double> radii) {
  SamplingPlan plan = default_plan(p, 3);
  plan.radius_grid = std::move(radii);
  return plan;
}

// max dist(q, P) / r over a lattice inside conv(P ∩ D), written without the
// library's sampler.
double lattice_precision(const PointCloud& p, const Ball& ball, double step) {
  std::vector<Point> inside;
  for (const Point& q : p.points()) {
    if (ball.contains(q)) inside.push_back(q);
  }
  std::vector<Point> poly;
  for (auto k : convex_hull_2d(inside)) poly.push_back(inside[k]);
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const Point& q : poly) {
    lo_x = std::min(lo_x, q[0]);
    hi_x = std::max(hi_x, q[0]);
    lo_y = std::min(lo_y, q[1]);
    hi_y = std::max(hi_y, q[1]);
  }
  double best = 0.0;
  for (double x = lo_x; x <= hi_x; x += step) {
    for (double y = lo_y; y <= hi_y; y += step) {
      const Point q(x, y);
      if (!in_convex_polygon(q, poly)) continue;
      double d = 1e300;
      for (const Point& s : p.points()) d = std::min(d, distance(q, s));
      best = std::max(best, d);
    }
  }
  return best / ball.radius;
}

}  // namespace

TEST_CASE("relative precision: two points") {
  const PrecisionEstimate e = relative_precision(two_points(), Ball(Point(0, 0), 1.1), default_plan(two_points()));
  CHECK(e.value == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
  CHECK(std::abs(e.witness.point[0]) < 1e-12);
}

TEST_CASE("relative precision: semicircle against a lattice oracle") {
  const PointCloud p = semicircle();
  const Ball ball(Point(0, 0), 1.05);
  const double oracle = lattice_precision(p, ball, 0.004);
  const double est = relative_precision(p, ball, default_plan(p)).value;
  CHECK(oracle == doctest::Approx(1.0 / 1.05).epsilon(1e-3));
  CHECK(std::abs(est - oracle) < 0.01);
  CHECK_THROWS_AS(relative_precision(p, Ball(Point(5, 5), 0.1), default_plan(p)), Error);
}

TEST_CASE("relative precision: convex polygon") {
  Scene s = resolve_scene("convex_polygon");
  s.density = 400;
  const PointCloud p = generate_scene(s);
  SamplingPlan plan = default_plan(p);
  plan.hull_sample_count = 64;
  CHECK(relative_precision(p, Ball(Point(0.1, 0.2), 0.6), plan).value <= 0.05);
}

TEST_CASE("nonconvexity function") {
  SUBCASE("convex square sample") {
    Scene s = resolve_scene("convex_polygon");
    s.density = 400;
    const PointCloud p = generate_scene(s);
    SamplingPlan plan = plan_with(p, {0.3, 0.6, 1.2});
    plan.ball_center_count = 60;
    plan.hull_sample_count = 32;
    const NonconvexityProfile prof = nonconvexity_function(p, plan);
    for (const auto& e : prof.entries) CHECK(e.alpha_hat <= 0.05);
  }
  SUBCASE("two points approach 1 as r falls to 1") {
    const NonconvexityProfile prof = nonconvexity_function(two_points(), plan_with(two_points(), {1.001, 1.01, 1.1}));
    REQUIRE(prof.entries.size() == 3);
    for (const auto& e : prof.entries) CHECK(e.alpha_hat == doctest::Approx(1.0 / e.radius).epsilon(1e-9));
    CHECK(prof.max_alpha() > 0.99);
  }
  SUBCASE("semicircle agrees with the grid oracle") {
    const PointCloud p = semicircle();
    const NonconvexityProfile prof = nonconvexity_function(p, plan_with(p, {0.5, 1.0}));
    for (const auto& e : prof.entries) {
      const double oracle = brute_force_alpha_oracle(p, e.radius, e.radius / 20.0);
      CHECK(std::abs(e.alpha_hat - oracle) <= 0.05);
      CHECK(e.alpha_hat >= 0.0);
      CHECK(e.alpha_hat < 2.0);
    }
  }
  SUBCASE("larger plans never lower the estimate") {
    const PointCloud p = semicircle();
    SamplingPlan small = plan_with(p, {0.3, 0.7});
    small.ball_center_count = 50;
    SamplingPlan big = small;
    big.ball_center_count = 200;
    const auto a = nonconvexity_function(p, small);
    const auto b = nonconvexity_function(p, big);
    for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(b.entries[i].alpha_hat >= a.entries[i].alpha_hat);
  }
}

TEST_CASE("check_paraconvexity") {
  Scene s = resolve_scene("convex_polygon");
  s.density = 400;
  const PointCloud poly = generate_scene(s);
  SamplingPlan plan = plan_with(poly, {0.3, 0.8});
  plan.ball_center_count = 40;
  plan.hull_sample_count = 32;
  CHECK(check_paraconvexity(poly, 0.05, false, plan).holds);

  const ParaconvexityVerdict v = check_paraconvexity(two_points(), 0.5, false, default_plan(two_points()));
  CHECK_FALSE(v.holds);
  CHECK(distance(v.witness_point.point, Point(0, 0)) < 1e-9);

  const PointCloud semi = semicircle();
  const SamplingPlan sp = plan_with(semi, log_spaced(0.2, 2.0, 8));
  const double alpha = nonconvexity_function(semi, sp).max_alpha();
  CHECK(check_paraconvexity(semi, std::min(alpha + 0.02, 0.999), true, sp).holds);
  CHECK_THROWS_AS(check_paraconvexity(semi, 1.0, false, sp), Error);
}

TEST_CASE("phi and the paraconvexity bounds") {
  ParaconvexityBounds b = phi_and_bounds(0.0);
  CHECK(b.phi == 0.0);
  CHECK(b.banach_bound == 0.0);
  CHECK(b.hilbert_bound == 0.0);

  b = phi_and_bounds(0.5);
  CHECK(b.phi == doctest::Approx(0.86603).epsilon(1e-5));
  CHECK(b.banach_bound == doctest::Approx(1.0));
  CHECK(b.hilbert_bound == doctest::Approx(0.83333).epsilon(1e-5));

  b = phi_and_bounds(1.0 / 3.0);
  CHECK(b.phi == doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-12));
  CHECK(b.banach_bound == doctest::Approx(0.5));
  CHECK(b.hilbert_bound == doctest::Approx(5.0 / 12.0));

  CHECK_THROWS_AS(phi_and_bounds(1.0), Error);
  CHECK_THROWS_AS(phi_and_bounds(-0.1), Error);
  for (double a = 0.05; a < 1.0; a += 0.05) CHECK(phi(a) >= a);
  CHECK(hilbert_constant_floor(0.5) == doctest::Approx(1.25 / 0.75));
}

TEST_CASE("gamma sequence") {
  GammaSequence s = gamma_sequence(0.5, 10);
  CHECK(s.fixed_point == doctest::Approx(0.4));
  CHECK(s.terms[0] == 0.5);
  CHECK(s.terms[1] == doctest::Approx(0.43301).epsilon(1e-5));

  s = gamma_sequence(0.9, 200);
  CHECK(std::abs(s.terms[199] - 2 * 0.81 / 1.81) <= 1e-9);
  CHECK(s.fixed_point == doctest::Approx(0.89503).epsilon(1e-5));

  CHECK(gamma_fixed_point(1e-6) < 1e-11);
  CHECK_THROWS_AS(gamma_sequence(1.0, 5), Error);
  CHECK_THROWS_AS(gamma_sequence(0.0, 5), Error);

  // Matches the naive recursion while the two are far from the fixed point.
  s = gamma_sequence(0.3, 6);
  double naive = 0.3;
  for (int n = 0; n < 6; ++n) {
    CHECK(s.terms[n] == doctest::Approx(naive).epsilon(1e-12));
    naive = 0.3 * phi(naive);
  }
}

TEST_CASE("threshold root") {
  const double a = threshold_root();
  CHECK(std::abs(a + a * a + a * a * a - 1.0) <= 1e-12);
  // Newton oracle.
  double x = 0.5;
  for (int i = 0; i < 60; ++i) x -= (x + x * x + x * x * x - 1.0) / (1.0 + 2.0 * x + 3.0 * x * x);
  CHECK(a == doctest::Approx(x).epsilon(1e-14));
  CHECK(a > 0.543689);
  CHECK(a < 0.543690);
  CHECK(a > 0.5);
}

TEST_CASE("in-ball distance bound") {
  SUBCASE("dense convex set") {
    Scene s = resolve_scene("convex_polygon");
    s.density = 400;
    const PointCloud p = generate_scene(s);
    const InBallDistanceReport r = verify_in_ball_distance_bound(p, Ball(Point(0.2, 0.1), 0.5), 0.05, default_plan(p));
    CHECK(r.violations == 0);
    CHECK(r.worst_ratio <= phi(0.05) + 1e-9);
  }
  SUBCASE("z at the center with its nearest point inside the ball") {
    const PointCloud p({Point(0.3, 0.0), Point(-0.3, 0.1), Point(3, 3)});
    const Ball d(Point(0, 0.05), 1.0);
    const Point z(0.0, 0.05);
    const double alpha = dist_to_cloud(z, p) / d.radius;
    CHECK(dist_to_cloud_in_ball(z, p, d) == doctest::Approx(dist_to_cloud(z, p)));
    CHECK(dist_to_cloud_in_ball(z, p, d) <= phi(alpha) * d.radius);
  }
  SUBCASE("randomized search finds no counterexample") {
    const InBallDistanceSearch s = search_in_ball_distance_counterexamples(10000, 42);
    CHECK(s.configurations == 10000);
    CHECK(s.violations == 0);
    CHECK(s.near_boundary > 0);
  }
}
