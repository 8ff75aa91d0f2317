#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "paraconvex/retraction_space.hpp"
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

RetractionOperator semi_retraction(double offset, double kappa) {
  RetractionOptions o;
  o.alpha_hat = semi().alpha;
  o.kappa = kappa;
  return build_retraction(semi().cloud, semi().alpha + offset, o);
}

}  // namespace

TEST_CASE("sup distance") {
  const ProbeGrid probes = make_probe_grid(BoundingBox(Point(-1, -1), Point(1, 1)), 5, {});
  CHECK(probes.probes.size() == 25);
  const FunctionOnBox a = FunctionOnBox::constant(Point(0, 0));
  const FunctionOnBox b = FunctionOnBox::constant(Point(3, 4));
  const FunctionOnBox id([](const Point& x) { return FunctionValue{x, 0.0}; }, "identity");
  CHECK(sup_distance(a, a, probes) == 0.0);
  CHECK(sup_distance(a, b, probes) == doctest::Approx(5.0));
  // Cell centers of a 5x5 lattice over [-1, 1]^2: the corner probe is (-0.8, -0.8).
  CHECK(sup_distance(a, id, probes) == doctest::Approx(0.8 * std::sqrt(2.0)));
  CHECK(sup_distance(b, id, probes) <= sup_distance(b, a, probes) + sup_distance(a, id, probes));
  CHECK(sup_distance(a, id, probes) == sup_distance(id, a, probes));
}

TEST_CASE("convex combination of retractions") {
  const RetractionOperator r1 = semi_retraction(0.03, 1.0);
  const RetractionOperator r2 = semi_retraction(0.05, 4.0);
  const std::vector<RetractionOperator> rs{r1, r2};
  const std::vector<double> half{0.5, 0.5};
  const FunctionOnBox q = combine_retractions(rs, half);
  const Point x(0.1, 0.2);
  const FunctionValue v = q.evaluate(x);
  const Point expect = (r1(x) + r2(x)) * 0.5;
  CHECK(distance(v.value, expect) < 1e-12);
  CHECK(v.spread == doctest::Approx(distance(r1(x), r2(x)) / 2).epsilon(1e-9));

  const std::vector<double> unit{1.0, 0.0};
  CHECK(combine_retractions(rs, unit)(x) == r1(x));
  const std::vector<double> bad{0.7, 0.7};
  CHECK_THROWS_AS(combine_retractions(rs, bad), Error);
  const std::vector<RetractionOperator> mixed{r1, build_retraction(segment(200), 0.2)};
  CHECK_THROWS_AS(combine_retractions(mixed, half), Error);
}

TEST_CASE("reprojection") {
  const RetractionOperator r1 = semi_retraction(0.03, 1.0);
  const RetractionOperator r2 = semi_retraction(0.05, 4.0);
  const std::vector<RetractionOperator> rs{r1, r2};
  const std::vector<double> w{0.3, 0.7};
  const FunctionOnBox q = combine_retractions(rs, w);
  const ProbeGrid probes = make_probe_grid(r1, 12);
  const double beta = semi().alpha + 0.05;
  const ReprojectionResult res = reproject_to_retraction(q, semi().cloud, beta, 1e-9, probes);
  REQUIRE(res.retraction);
  CHECK(res.sup_distance <= res.bound);
  CHECK(res.bound == doctest::Approx(beta / (1 - beta) * res.max_rho + 1e-8));
  for (const Point& p : semi().cloud.points()) CHECK((*res.retraction)(p) == p);
  for (const Point& x : probes.probes) CHECK(dist_to_cloud((*res.retraction)(x), semi().cloud) == 0.0);

  // A constant off P cannot be reprojected with a tiny slack.
  const FunctionOnBox off = FunctionOnBox::constant(Point(0, 0));
  CHECK_THROWS_AS(reproject_to_retraction(off, semi().cloud, beta, 1e-9, probes), Error);
}

TEST_CASE("space estimate on the semicircle") {
  const RetractionOperator base = semi_retraction(0.05, 2.0);
  const ProbeGrid probes = make_probe_grid(base, 10);
  EnsembleOptions o;
  o.combinations = 4;
  const SpaceEstimate e = estimate_space_paraconvexity(semi().cloud, semi().alpha, 3, probes, 77, o);
  CHECK(e.ensemble_size == 3);
  REQUIRE(e.samples.size() == 4);
  double worst = 0.0;
  for (const SpaceSample& s : e.samples) {
    CHECK(s.members.size() >= 2);
    CHECK(s.sup_distance <= s.bound);
    worst = std::max(worst, s.ratio);
  }
  CHECK(e.ratio == worst);
  CHECK(e.ratio <= semi().alpha / (1 - semi().alpha) + 0.1);

  const SpaceEstimate again = estimate_space_paraconvexity(semi().cloud, semi().alpha, 3, probes, 77, o);
  CHECK(again.ratio == e.ratio);
}

TEST_CASE("families of sets") {
  const PointCloud seg = segment(100);
  SUBCASE("constant family gives identical operators") {
    const FamilyOfSets f = FamilyOfSets::from_sets({0.0, 1.0, 2.0}, {seg, seg, seg});
    for (double h : f.hausdorff_steps) CHECK(h == 0.0);
    const RetractionFamily fam = build_retraction_family(f, 0.2);
    const ProbeGrid probes = make_probe_grid(fam.operators[0], 10);
    const auto rows = continuity_modulus(f, fam.operators, probes, fam.alpha_hat);
    for (const ModulusRow& row : rows) {
      CHECK(row.sup_dist == 0.0);
      CHECK_FALSE(row.flagged);
    }
  }
  SUBCASE("translated segment follows the translation") {
    Scene s = resolve_scene("segment");
    s.density = 100;
    s.family_sweep = FamilySweep{"ty", 0.0, 0.1, 4};
    const FamilyOfSets f = generate_family(s);
    REQUIRE(f.sets.size() == 5);
    for (double h : f.hausdorff_steps) CHECK(h == doctest::Approx(0.025));
    const RetractionFamily fam = build_retraction_family(f, 0.2);
    for (std::size_t t = 0; t < f.sets.size(); ++t) {
      for (const Point& p : f.sets[t].points()) CHECK(fam.operators[t](p) == p);
    }
    const std::vector<Point> vals = evaluate_family(fam.operators, Point(0.3, 0.5));
    for (std::size_t t = 0; t < vals.size(); ++t) {
      CHECK(vals[t] == fam.operators[t](Point(0.3, 0.5)));
      CHECK(dist_to_cloud(vals[t], f.sets[t]) == 0.0);
    }
    const ProbeGrid probes = make_probe_grid(fam.operators[0], 10);
    for (const ModulusRow& row : continuity_modulus(f, fam.operators, probes, fam.alpha_hat)) {
      CHECK(row.delta == doctest::Approx(0.025));
      CHECK(row.ratio <= 1.1);
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(FamilyOfSets::from_sets({1.0, 0.0}, {seg, seg}), Error);
    FamilyOfSets f = FamilyOfSets::from_sets({0.0, 1.0}, {seg, seg});
    f.hausdorff_steps[0] = 0.5;
    CHECK_THROWS_AS(f.validate(), Error);
    const PointCloud two({Point(-1, 0), Point(1, 0)});
    CHECK_THROWS_AS(build_retraction_family(FamilyOfSets::from_sets({0.0}, {two}), 0.5), Error);
  }
}

TEST_CASE("sigma-convex combination") {
  const RetractionOperator r = semi_retraction(0.05, 2.0);
  const PointCloud& p = semi().cloud;
  const std::vector<Point> one{p[10]};
  const std::vector<double> w1{1.0};
  CHECK(sigma_convex_combination(r, one, w1) == p[10]);

  const std::vector<Point> ys{p[10], p[11]};
  const std::vector<double> w{0.5, 0.5};
  const Point z = sigma_convex_combination(r, ys, w);
  CHECK(dist_to_cloud(z, p) == 0.0);

  const std::vector<Point> off{Point(0, 0), p[3]};
  CHECK_THROWS_AS(sigma_convex_combination(r, off, w), Error);
  const std::vector<double> bad{0.2, 0.2};
  CHECK_THROWS_AS(sigma_convex_combination(r, ys, bad), Error);

  // On a convex segment the combination of members lands on a member near the Euclidean one.
  const PointCloud seg = segment(201);
  const RetractionOperator rs = build_retraction(seg, 0.1);
  const std::vector<Point> ends{seg[0], seg[200]};
  const std::vector<double> w2{0.25, 0.75};
  const Point m = sigma_convex_combination(rs, ends, w2);
  CHECK(distance(m, seg[0] * 0.25 + seg[200] * 0.75) <= 0.012);
}

TEST_CASE("pairwise disjoint values") {
  const PointCloud a({Point(0, 0), Point(1, 0)});
  const PointCloud b({Point(0, 1), Point(1, 1)});
  const PointCloud c({Point(1, 0), Point(2, 0)});
  const std::vector<PointCloud> ok{a, b};
  const std::vector<PointCloud> clash{a, b, c};
  CHECK(pairwise_disjoint(ok));
  CHECK_FALSE(pairwise_disjoint(clash));
}
