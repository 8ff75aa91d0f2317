#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "paraconvex/artifacts.hpp"
#include "paraconvex/scenes.hpp"

using namespace paraconvex;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("numbers round trip") {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.9385074617}) {
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::isnan(parse_number(format_number(std::nan("")))));
  CHECK_THROWS_AS(parse_number("1.5x"), Error);
  CHECK_THROWS_AS(parse_number(""), Error);
}

TEST_CASE("csv") {
  CsvTable t{{"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", ""}, {"line\nbreak", "z"}}};
  const std::string text = to_csv(t);
  CHECK(text.substr(0, 4) == "a,b\n");
  CHECK(text.back() == '\n');
  const CsvTable back = parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("b") == 1);
  CHECK_THROWS_AS(back.column("c"), Error);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), Error);
}

TEST_CASE("typed tables round trip") {
  const std::vector<ProfileRow> prof{{"semi", 0.5, 0.93, 0.1, 0.2, 0.3, 0.4}, {"semi, b", 1.0, 0.0, 0, 0, 0, 0}};
  CHECK(profile_rows_from_table(parse_csv(to_csv(to_table(prof)))) == prof);

  const auto consts = constants_rows({0.0, 0.25, 0.5});
  REQUIRE(consts.size() == 3);
  CHECK(consts[2].phi == doctest::Approx(std::sqrt(0.75)));
  CHECK(consts[2].banach == doctest::Approx(1.0));
  CHECK(consts[0].threshold == doctest::Approx(0.5436890127).epsilon(1e-9));
  CHECK(constants_rows_from_table(parse_csv(to_csv(to_table(consts)))) == consts);

  const std::vector<FieldRow> field{{0.0, 0.5, 0.0, 1.0, 0.5, 0.5}, {1.0, 1.0, 0.7, 0.7, 0.41, 0.42}};
  CHECK(field_rows_from_table(parse_csv(to_csv(to_table(field)))) == field);

  const std::vector<ModulusRow> mod{{0, 0.1, 0.05, 0.5, false}, {1, 0.1, 0.2, 1.7, true}};
  const auto mod_back = modulus_rows_from_table(parse_csv(to_csv(to_table(mod))));
  REQUIRE(mod_back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(mod_back[i].index == mod[i].index);
    CHECK(mod_back[i].delta == mod[i].delta);
    CHECK(mod_back[i].sup_dist == mod[i].sup_dist);
    CHECK(mod_back[i].ratio == mod[i].ratio);
    CHECK(mod_back[i].flagged == mod[i].flagged);
  }

  SpaceSample s;
  s.members = {0, 3, 5};
  s.weights = {0.2, 0.3, 0.5};
  s.radius = 0.01;
  s.max_rho = 0.011;
  s.sup_distance = 0.002;
  s.bound = 0.2;
  s.ratio = 0.2;
  const auto space_back = space_rows_from_table(parse_csv(to_csv(to_table(std::vector<SpaceSample>{s}))));
  REQUIRE(space_back.size() == 1);
  CHECK(space_back[0].members == s.members);
  CHECK(space_back[0].weights == s.weights);
  CHECK(space_back[0].max_rho == s.max_rho);
  CHECK(space_back[0].ratio == s.ratio);
}

TEST_CASE("profile rows mark missing witnesses") {
  NonconvexityProfile p;
  p.entries.push_back(ProfileEntry{});
  p.entries[0].radius = 0.5;
  const auto rows = profile_rows("x", p);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].r == 0.5);
}

TEST_CASE("svg output") {
  const PointCloud cloud = generate_scene(resolve_scene("semicircle"));
  const std::vector<FieldRow> field{{0.0, 0.0, 0.0, 1.0, 1.0, 1.0}, {0.5, 0.2, 0.9, 0.4, 0.3, 0.45}};
  const std::string svg = field_svg(cloud, field, "field <demo>");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "<circle") == cloud.size());
  CHECK(count(svg, "marker-end") == field.size());
  CHECK(svg.find("field &lt;demo&gt;") != std::string::npos);

  const std::string plot = line_plot_svg({1, 2, 3}, {0.1, 0.2, 0.15}, "m", "t", "ratio", 1.0);
  CHECK(count(plot, "<polyline") == 1);
  CHECK(count(plot, "stroke-dasharray") == 1);
  CHECK(count(line_plot_svg({1, 2}, {1, 2}, "m", "t", "y", std::nan("")), "stroke-dasharray") == 0);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "paraconvex_artifact_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file(dir / "a.csv", "x\n1\n");
  CHECK(read_text_file(dir / "a.csv") == "x\n1\n");
  write_text_file(dir / "a.csv", "y\n");
  CHECK(read_text_file(dir / "a.csv") == "y\n");
  CHECK_THROWS_AS(read_text_file(dir / "missing.csv"), Error);
  std::filesystem::remove_all(dir.parent_path());
}
