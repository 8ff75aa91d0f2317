#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "paraconvex/retraction.hpp"
#include "paraconvex/scenes.hpp"

using namespace paraconvex;

namespace {

PointCloud segment(std::size_t n) {
  Scene s = resolve_scene("segment");
  s.density = n;
  return generate_scene(s);
}

struct Semi {
  PointCloud cloud = generate_scene(resolve_scene("semicircle"));
  double alpha = nonconvexity_function(cloud, default_plan(cloud)).max_alpha();
};

const Semi& semi() {
  static const Semi s;
  return s;
}

RetractionOperator semicircle_retraction() {
  RetractionOptions o;
  o.alpha_hat = semi().alpha;
  return build_retraction(semi().cloud, semi().alpha + 0.05, o);
}

}  // namespace

TEST_CASE("singleton target gives the constant map") {
  const PointCloud p({Point(1, 2)});
  const RetractionOperator r = build_retraction(p, 0.5);
  CHECK(r.kind() == "constant");
  CHECK(r(Point(0, 1)) == Point(1, 2));
  CHECK(r(Point(2.4, 3.4)) == Point(1, 2));
  CHECK_THROWS_AS(r(Point(0, 0)), Error);
}

TEST_CASE("segment retraction satisfies the retraction laws") {
  const PointCloud p = segment(200);
  const RetractionOperator r = build_retraction(p, 0.1);
  CHECK(r.measured_alpha() < 0.1);
  for (const Point& q : p.points()) CHECK(r(q) == q);
  for (const Point& x : diagnostic_queries(r, 300, 1)) {
    const Point y = r(x);
    CHECK(dist_to_cloud(y, p) == 0.0);
    CHECK(r(y) == y);
    CHECK(distance(x, y) <= r.certified_C() * dist_to_cloud(x, p) * (1 + 1e-3));
  }
  CHECK_THROWS_AS(r(Point(100, 100)), Error);
}

TEST_CASE("small beta on a convex set is close to the nearest-point projection") {
  const PointCloud p = segment(400);
  const RetractionOperator r = build_retraction(p, 0.05);
  const UniformityReport rep = retraction_diagnostics(r, default_eps_grid(r), 400, 9);
  CHECK(rep.lipschitz_at_P_ratio < 1.5);
  for (const Point& x : diagnostic_queries(r, 200, 4)) {
    const Point proj(std::clamp(x[0], -1.0, 1.0), 0.0);
    CHECK(distance(r(x), proj) <= 2.2 * (dist_to_cloud(x, p) + 0.01));
  }
}

TEST_CASE("build_retraction preconditions") {
  const PointCloud two({Point(-1, 0), Point(1, 0)});
  try {
    build_retraction(two, 0.5);
    FAIL("expected precondition failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition_failed);
    REQUIRE(e.witness());
    CHECK(std::abs((*e.witness())[0]) < 1e-9);
  }
  CHECK_THROWS_AS(build_retraction(two, 1.0), Error);
  CHECK_THROWS_AS(build_retraction(two, 0.99, 1.5), Error);
}

TEST_CASE("semicircle retraction") {
  const RetractionOperator r = semicircle_retraction();
  const double beta = semi().alpha + 0.05;
  CHECK(r.certified_C() == doctest::Approx(2.0 / (1.0 - beta)));
  CHECK(r.beta() == beta);
  CHECK(eval_retraction(r, semi().cloud[3]) == semi().cloud[3]);

  double worst = 0.0;
  for (const Point& x : diagnostic_queries(r, 1000, 17)) {
    const Point y = r(x);
    CHECK(r(y) == y);
    const double d = dist_to_cloud(x, semi().cloud);
    worst = std::max(worst, distance(x, y) / d);
  }
  CHECK(worst <= r.certified_C() * (1 + 1e-3));
}

TEST_CASE("retraction diagnostics") {
  const RetractionOperator r = semicircle_retraction();
  const UniformityReport rep = retraction_diagnostics(r, default_eps_grid(r), 500, 5);
  CHECK(rep.sample_count == 500);
  REQUIRE(rep.rows.size() == 6);
  for (const auto& row : rep.rows) CHECK(row.delta > 0.0);
  CHECK(rep.lipschitz_at_P_ratio <= 1.0 + r.certified_C() + 0.01);
  CHECK(rep.lipschitz_ok);
  CHECK(rep.idempotence_failures == 0);
  CHECK(rep.max_membership_error == 0.0);
  CHECK_THROWS_AS(retraction_diagnostics(r, {0.1, -1.0}, 10, 5), Error);
}

TEST_CASE("evaluation is deterministic") {
  const RetractionOperator a = semicircle_retraction();
  const RetractionOperator b = semicircle_retraction();
  for (const Point& x : diagnostic_queries(a, 100, 2)) CHECK(a(x) == b(x));
  CHECK(diagnostic_queries(a, 50, 8) == diagnostic_queries(b, 50, 8));
}
