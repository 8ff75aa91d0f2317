#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "json.hpp"

#include "paraconvex/artifacts.hpp"
#include "paraconvex/verification.hpp"

using namespace paraconvex;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const fs::path& dir) {
  RunConfig c;
  c.output_dir = dir;
  c.ball_center_count = 60;
  c.hull_sample_count = 32;
  c.query_count = 100;
  c.determinism_rerun = false;
  return c;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = RunConfig{};
  c.only = {11};
  CHECK_THROWS_AS(c.validate(), Error);
  c = RunConfig{};
  c.query_count = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("forced beta below alpha gives a structured failure") {
  const fs::path dir = fresh_dir("paraconvex_verify_forced");
  RunConfig c = small_config(dir);
  c.only = {5};
  c.forced_beta = 0.5;
  const VerificationReport rep = run_verification_suite(c);
  REQUIRE(rep.criteria.size() == 1);
  const CriterionResult& r = rep.criteria[0];
  CHECK(r.id == 5);
  CHECK_FALSE(r.passed);
  CHECK(r.error == "precondition_failed");
  CHECK(r.detail.find("witness") != std::string::npos);
  CHECK_FALSE(rep.all_passed());
  fs::remove_all(dir);
}

TEST_CASE("an empty output directory is created and filled") {
  const fs::path dir = fresh_dir("paraconvex_verify_files") / "nested";
  RunConfig c = small_config(dir);
  c.only = {1, 5};
  const VerificationReport rep = run_verification_suite(c);
  REQUIRE(rep.criteria.size() == 2);
  for (const auto& r : rep.criteria) CHECK_MESSAGE(r.passed, r.name, ": ", r.detail);
  CHECK(fs::exists(dir / "constants.csv"));
  CHECK(fs::exists(dir / "criteria.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  std::size_t svg = 0;
  for (const auto& f : rep.files) {
    CHECK(fs::exists(dir / f));
    if (f.extension() == ".svg") ++svg;
  }
  CHECK(svg >= 2);

  const CsvTable criteria = parse_csv(read_text_file(dir / "criteria.csv"));
  CHECK(criteria.rows.size() == 2);
  const auto summary = nlohmann::json::parse(read_text_file(dir / "summary.json"));
  CHECK(summary.at("seed").get<std::uint64_t>() == c.seed);
  CHECK(summary.at("criteria").size() == 2);
  CHECK(summary.at("passed").get<bool>());
  fs::remove_all(dir.parent_path());
}
