#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "paraconvex/scenes.hpp"

using namespace paraconvex;

TEST_CASE("generators") {
  const PointCloud semi = generate_scene(resolve_scene("semicircle"));
  CHECK(semi.size() == 100);
  for (const Point& p : semi.points()) {
    CHECK(norm(p) == doctest::Approx(1.0));
    CHECK(p[1] >= -1e-15);
  }

  CHECK(generate_scene(resolve_scene("two_points")).size() == 2);

  Scene seg = resolve_scene("segment");
  seg.density = 11;
  const PointCloud s = generate_scene(seg);
  CHECK(s.size() == 11);
  CHECK(s[0] == Point(-1, 0));
  CHECK(s[10] == Point(1, 0));

  const PointCloud poly = generate_scene(resolve_scene("convex_polygon"));
  CHECK(poly.size() > 1000);
  CHECK(poly.bounds().hi[0] == doctest::Approx(std::sqrt(0.5)));

  Scene sr = resolve_scene("sin_reciprocal");
  sr.density = 500;
  const PointCloud wave = generate_scene(sr);
  CHECK(wave.size() == 500);
  for (const Point& p : wave.points()) CHECK(p[1] == doctest::Approx(std::sin(1.0 / p[0])).epsilon(1e-9));

  for (const char* name : {"disk", "arc", "spiral"}) CHECK(generate_scene(resolve_scene(name)).size() > 100);
}

TEST_CASE("bad scenes") {
  CHECK_THROWS_AS(resolve_scene("no_such_scene"), Error);
  CHECK_THROWS_AS(generator_from_string("blob"), Error);
  Scene s = resolve_scene("segment");
  s.params["x1"] = -1.0;
  CHECK_THROWS_AS(generate_scene(s), Error);
  Scene arc = resolve_scene("arc");
  arc.params["angle"] = 7.0;
  CHECK_THROWS_AS(generate_scene(arc), Error);
  CHECK_THROWS_AS(scene_from_json_text("{not json"), Error);
  CHECK_THROWS_AS(scene_from_json_text("[1, 2]"), Error);
  CHECK_THROWS_AS(generate_family(resolve_scene("segment")), Error);
}

TEST_CASE("rigid motions and sweeps") {
  const RigidMotion m{std::acos(-1.0) / 2, 2.0, 1.0, 0.0, 0.0};
  const Point q = m.apply(Point(1, 0));
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(2.0));

  Scene s = resolve_scene("semicircle");
  s.family_sweep = FamilySweep{"angle", 0.0, 1.0, 4};
  const FamilyOfSets f = generate_family(s);
  REQUIRE(f.sets.size() == 5);
  CHECK(f.params.front() == 0.0);
  CHECK(f.params.back() == 1.0);
  for (std::size_t t = 0; t < f.sets.size(); ++t) {
    CHECK(f.sets[t].size() == 100);
    if (t > 0) CHECK(f.hausdorff_steps[t - 1] > 0.0);
  }
  s.family_sweep->parameter = "shear";
  CHECK_THROWS_AS(generate_family(s), Error);
}

TEST_CASE("scene JSON round trip") {
  Scene s;
  s.name = "demo";
  s.generator = Generator::circle_arc;
  s.params = {{"angle", 2.0}, {"radius", 0.5}};
  s.density = 77;
  s.transform = RigidMotion{0.3, 1.5, 0.1, -0.2, 0.0};
  s.family_sweep = FamilySweep{"tx", 0.0, 0.5, 10};
  const Scene back = scene_from_json_text(scene_to_json_text(s));
  CHECK(back.name == "demo");
  CHECK(back.generator == Generator::circle_arc);
  CHECK(back.params == s.params);
  CHECK(back.density == 77);
  REQUIRE(back.transform);
  CHECK(back.transform->scale == 1.5);
  REQUIRE(back.family_sweep);
  CHECK(back.family_sweep->steps == 10);
  CHECK(generate_scene(back).points() == generate_scene(s).points());

  const Scene custom = scene_from_json_text(R"({"generator": "custom_points", "points": [[0, 0], [1, 2]]})");
  CHECK(generate_scene(custom).size() == 2);

  const auto path = std::filesystem::temp_directory_path() / "paraconvex_scene_test.json";
  {
    std::ofstream out(path);
    out << scene_to_json_text(s);
  }
  CHECK(resolve_scene(path.string()).density == 77);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), Error);
}

TEST_CASE("generation is deterministic") {
  for (const char* name : {"semicircle", "convex_polygon", "sin_reciprocal", "spiral", "disk"}) {
    CHECK(generate_scene(resolve_scene(name)).points() == generate_scene(resolve_scene(name)).points());
  }
}

TEST_CASE("grid oracle") {
  const PointCloud two({Point(-1, 0), Point(1, 0)});
  CHECK(brute_force_alpha_oracle(two, 1.5, 0.05) == doctest::Approx(1.0 / 1.5).epsilon(1e-9));
  CHECK_THROWS_AS(brute_force_alpha_oracle(two, 1.0, 0.1), Error);
  const PointCloud three({Point(0, 0, 0), Point(1, 0, 0)});
  CHECK_THROWS_AS(brute_force_alpha_oracle(three, 1.0, 0.01), Error);
}
