// paraconvex: command-line front end for the nonconvexity toolkit.
//
// Exit status: 0 success, 1 a check or precondition failed, 2 invalid input.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "paraconvex/artifacts.hpp"
#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/retraction.hpp"
#include "paraconvex/retraction_space.hpp"
#include "paraconvex/scenes.hpp"
#include "paraconvex/verification.hpp"

namespace fs = std::filesystem;
using namespace paraconvex;

namespace {

struct Common {
  std::uint64_t seed = RunConfig{}.seed;
  std::string out;
  std::size_t density = 0;  // 0: scene default
  double tol = 1e-8;
};

std::string file_stem(const Scene& s) {
  std::string out;
  for (char c : s.name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out.empty() ? std::string(to_string(s.generator)) : out;
}

Scene load(const std::string& name, const Common& common) {
  Scene s = resolve_scene(name);
  if (fs::exists(name)) s.name = fs::path(name).stem().string();
  if (common.density) s.density = common.density;
  return s;
}

fs::path out_dir(const Common& common) { return common.out.empty() ? default_output_dir() : fs::path(common.out); }

void emit(const Common& common, const std::string& name, const std::string& content) {
  const fs::path path = out_dir(common) / name;
  write_text_file(path, content);
  fmt::print("wrote {}\n", path.string());
}

double measured_alpha(const PointCloud& cloud, std::uint64_t seed) {
  return nonconvexity_function(cloud, default_plan(cloud, seed)).max_alpha();
}

int analyze(const Common& common, const std::string& scene_name, const std::vector<double>& radii,
            std::size_t centers, std::size_t samples) {
  const Scene scene = load(scene_name, common);
  const PointCloud cloud = generate_scene(scene);
  SamplingPlan plan = default_plan(cloud, common.seed);
  if (!radii.empty()) plan.radius_grid = radii;
  if (centers) plan.ball_center_count = centers;
  if (samples) plan.hull_sample_count = samples;
  const NonconvexityProfile profile = nonconvexity_function(cloud, plan);
  fmt::print("{}: {} points, diameter {:.6g}, resolution {:.6g}\n", scene.name, cloud.size(), cloud.diameter(),
             cloud.resolution());
  fmt::print("{:>12} {:>12}\n", "r", "alpha_hat");
  for (const auto& e : profile.entries) {
    if (e.present) {
      fmt::print("{:>12.6g} {:>12.6g}\n", e.radius, e.alpha_hat);
    } else {
      fmt::print("{:>12.6g} {:>12}\n", e.radius, "-");
    }
  }
  fmt::print("max alpha_hat {:.6g}\n", profile.max_alpha());
  emit(common, "profile_" + file_stem(scene) + ".csv", to_csv(to_table(profile_rows(scene.name, profile))));
  return 0;
}

int retract(const Common& common, const std::string& scene_name, double beta, std::size_t queries) {
  const Scene scene = load(scene_name, common);
  const PointCloud cloud = generate_scene(scene);
  RetractionOptions ro;
  ro.tol = common.tol;
  ro.plan = default_plan(cloud, common.seed);
  const RetractionOperator r = build_retraction(cloud, beta, ro);
  const UniformityReport rep = retraction_diagnostics(r, default_eps_grid(r), queries, common.seed);
  fmt::print("{}: beta {:.6g}, alpha_hat {:.6g}, C = 2/(1-beta) = {:.6g}\n", scene.name, beta, r.measured_alpha(),
             r.certified_C());
  fmt::print("max |x - R(x)| / d(x)       {:.6g}\n", rep.displacement_ratio);
  fmt::print("max dist(R(x), P)           {:.3g}\n", rep.max_membership_error);
  fmt::print("Lipschitz ratio at P        {:.6g} (bound {:.6g})\n", rep.lipschitz_at_P_ratio, rep.lipschitz_bound);
  fmt::print("idempotence failures        {}\n", rep.idempotence_failures);
  fmt::print("resolution-limited queries  {}\n", rep.resolution_limited);
  for (const auto& row : rep.rows) fmt::print("eps {:.4g} -> delta {:.4g}\n", row.eps, row.delta);

  std::vector<FieldRow> field;
  for (const Point& x : diagnostic_queries(r, queries, common.seed)) {
    const Point y = r(x);
    field.push_back({x[0], x[1], y[0], y[1], dist_to_cloud(x, cloud), distance(x, y)});
  }
  const std::string stem = file_stem(scene);
  emit(common, "retraction_" + stem + ".csv", to_csv(to_table(field)));
  if (cloud.dim() == 2) emit(common, "retraction_" + stem + ".svg", field_svg(cloud, field, "retraction field: " + scene.name));
  const bool ok = rep.lipschitz_ok && rep.idempotence_failures == 0 && rep.max_membership_error <= 1e-6 * cloud.diameter();
  return ok ? 0 : 1;
}

int space(const Common& common, const std::string& scene_name, std::size_t ensemble, std::size_t combinations,
          std::size_t probe_density) {
  const Scene scene = load(scene_name, common);
  const PointCloud cloud = generate_scene(scene);
  const double alpha = measured_alpha(cloud, common.seed);
  RetractionOptions ro;
  ro.alpha_hat = alpha;
  const RetractionOperator base = build_retraction(cloud, std::min(alpha + 0.05, 0.999), ro);
  const ProbeGrid probes = make_probe_grid(base, probe_density);
  EnsembleOptions eo;
  eo.combinations = combinations;
  const SpaceEstimate est = estimate_space_paraconvexity(cloud, alpha, ensemble, probes, common.seed, eo);
  fmt::print("{}: alpha_hat {:.6g}, {} retractions, {} probes\n", scene.name, alpha, est.ensemble_size,
             probes.probes.size());
  if (est.degenerate) {
    fmt::print("all retractions agree on the probes; nothing to estimate\n");
    return 0;
  }
  bool ok = true;
  for (const auto& s : est.samples) {
    if (s.radius == 0.0) continue;
    fmt::print("r {:.4g}  sup_distance {:.4g}  bound {:.4g}  ratio {:.4g}\n", s.radius, s.sup_distance, s.bound, s.ratio);
    ok = ok && s.sup_distance <= s.bound + 1e-6;
  }
  fmt::print("space estimate {:.6g} (alpha/(1-alpha) = {:.6g})\n", est.ratio, alpha / (1.0 - alpha));
  emit(common, "space_" + file_stem(scene) + ".csv", to_csv(to_table(est.samples)));
  return ok ? 0 : 1;
}

// "<parameter>:<from>:<to>:<steps>", e.g. "angle:0:1.5708:50".
FamilySweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4) throw Error(ErrorKind::invalid_argument, "sweep must look like parameter:from:to:steps");
  FamilySweep s;
  s.parameter = parts[0];
  try {
    s.from = std::stod(parts[1]);
    s.to = std::stod(parts[2]);
    const long steps = std::stol(parts[3]);
    if (steps < 1) throw Error(ErrorKind::invalid_argument, "sweep steps must be positive");
    s.steps = static_cast<std::size_t>(steps);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::invalid_argument, "sweep: bad number in '" + text + "'");
  }
  return s;
}

int family(const Common& common, const std::string& scene_name, const std::string& sweep, double beta_offset,
           std::size_t probe_density) {
  Scene scene = load(scene_name, common);
  scene.family_sweep = parse_sweep(sweep);
  const FamilyOfSets fam = generate_family(scene);
  const double alpha = measured_alpha(fam.sets.front(), common.seed);
  FamilyOptions fo;
  fo.alpha_hat = alpha;
  fo.plan = default_plan(fam.sets.front(), common.seed);
  const RetractionFamily rf = build_retraction_family(fam, alpha + beta_offset, fo);
  for (const auto& w : rf.warnings) fmt::print("warning: {}\n", w);
  const ProbeGrid probes = make_probe_grid(rf.operators.front().working_box(), probe_density, {});
  const std::vector<ModulusRow> rows = continuity_modulus(fam, rf.operators, probes, alpha);
  std::vector<double> xs, ys;
  std::size_t flagged = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.index));
    ys.push_back(r.ratio);
    worst = std::max(worst, r.ratio);
    flagged += r.flagged;
  }
  fmt::print("{}: {} members, alpha_hat {:.6g}, beta {:.6g}\n", scene.name, fam.sets.size(), alpha, alpha + beta_offset);
  fmt::print("max sup_dist (1 - alpha) / delta = {:.6g}, flagged {}\n", worst, flagged);
  const std::string stem = file_stem(scene);
  emit(common, "modulus_" + stem + ".csv", to_csv(to_table(rows)));
  emit(common, "modulus_" + stem + ".svg",
       line_plot_svg(xs, ys, "continuity modulus: " + scene.name, "step", "sup_dist (1 - alpha) / delta", 1.1));
  return flagged ? 1 : 0;
}

int constants(const Common& common, std::vector<double> alphas) {
  if (alphas.empty()) {
    for (int k = 0; k <= 9; ++k) alphas.push_back(k / 10.0);
  }
  const auto rows = constants_rows(alphas);
  fmt::print("{:>8} {:>12} {:>12} {:>12}\n", "alpha", "phi", "banach", "hilbert");
  for (const auto& r : rows) fmt::print("{:>8.4g} {:>12.8g} {:>12.8g} {:>12.8g}\n", r.alpha, r.phi, r.banach, r.hilbert);
  fmt::print("threshold root of a + a^2 + a^3 = 1: {:.15g}\n", threshold_root());
  emit(common, "constants.csv", to_csv(to_table(rows)));
  return 0;
}

int verify(const Common& common, const std::vector<int>& only, bool rerun, std::optional<double> forced_beta) {
  RunConfig cfg;
  cfg.seed = common.seed;
  cfg.tol = common.tol;
  cfg.output_dir = out_dir(common);
  cfg.only = only;
  cfg.determinism_rerun = rerun;
  cfg.forced_beta = forced_beta;
  const VerificationReport report = run_verification_suite(cfg);
  for (const auto& c : report.criteria) {
    fmt::print("[{}] {:>2} {:<26} {:7.1f}s  {}{}\n", c.passed ? "PASS" : "FAIL", c.id, c.name, c.seconds,
               c.error.empty() ? "" : c.error + ": ", c.detail);
  }
  fmt::print("summary written to {}\n", (cfg.output_dir / "summary.json").string());
  return report.all_passed() ? 0 : 1;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::io:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure nonconvexity of point clouds and build retractions onto them"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Seed for every randomized step");
  app.add_option("--out", common.out, "Output directory (default: $PARACONVEX_OUT or ./paraconvex-out)");
  app.add_option("--density", common.density, "Override the scene density")->check(CLI::PositiveNumber);
  app.add_option("--tol", common.tol, "Relative stopping tolerance of the iterations")->check(CLI::PositiveNumber);

  std::string scene;
  std::vector<double> radii, alphas;
  std::size_t centers = 0, samples = 0, queries = 1000, ensemble = 9, combinations = 16, probe_density = 40;
  double beta = 0.0, beta_offset = 0.05;
  std::string sweep;
  std::vector<int> only;
  bool no_rerun = false;
  std::optional<double> forced_beta;

  auto* a = app.add_subcommand("analyze", "Nonconvexity profile alpha_hat(r) of a scene");
  a->add_option("scene", scene, "Built-in scene name or scene file")->required();
  a->add_option("--radii", radii, "Radii to sample (default: 24 log-spaced)")->delimiter(',');
  a->add_option("--ball-centers", centers, "Ball centers per family");
  a->add_option("--hull-samples", samples, "Random hull points per ball");

  auto* r = app.add_subcommand("retract", "Build a retraction and report its diagnostics");
  r->add_option("scene", scene)->required();
  r->add_option("--beta", beta, "Contraction, must exceed the measured alpha_hat")->required();
  r->add_option("--queries", queries, "Number of query points")->check(CLI::PositiveNumber);

  auto* s = app.add_subcommand("space", "Ensemble estimate of the nonconvexity of the set of retractions");
  s->add_option("scene", scene)->required();
  s->add_option("--ensemble", ensemble, "Number of retractions")->check(CLI::Range(2, 64));
  s->add_option("--combinations", combinations, "Sampled convex combinations")->check(CLI::PositiveNumber);
  s->add_option("--probes", probe_density, "Probe lattice points per axis")->check(CLI::Range(2, 400));

  auto* f = app.add_subcommand("family", "Continuously chosen retractions along a swept family");
  f->add_option("scene", scene)->required();
  f->add_option("--sweep", sweep, "parameter:from:to:steps, parameter one of angle, scale, tx, ty, tz")->required();
  f->add_option("--beta-offset", beta_offset, "beta = alpha_hat + offset")->check(CLI::PositiveNumber);
  f->add_option("--probes", probe_density, "Probe lattice points per axis")->check(CLI::Range(2, 400));

  auto* c = app.add_subcommand("constants", "Table of phi(a), a/(1-a), a(1+a^2)/(1-a^2) and the threshold root");
  c->add_option("--alpha", alphas, "Values of alpha in [0, 1)")->delimiter(',');

  auto* v = app.add_subcommand("verify", "Run the acceptance criteria");
  v->add_option("--only", only, "Criteria to run, e.g. 1,2,3")->delimiter(',')->check(CLI::Range(1, 10));
  v->add_flag("--no-rerun", no_rerun, "Skip the determinism rerun of criterion 10");
  v->add_option("--force-beta", forced_beta, "Use this beta for the retraction criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*a) return analyze(common, scene, radii, centers, samples);
    if (*r) return retract(common, scene, beta, queries);
    if (*s) return space(common, scene, ensemble, combinations, probe_density);
    if (*f) return family(common, scene, sweep, beta_offset, probe_density);
    if (*c) return constants(common, alphas);
    if (*v) return verify(common, only, !no_rerun, forced_beta);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.kind())).c_str(), e.what());
    if (e.witness()) {
      std::string w;
      for (std::size_t i = 0; i < e.witness()->dim(); ++i) w += fmt::format(" {:.6g}", (*e.witness())[i]);
      std::fprintf(stderr, "witness:%s\n", w.c_str());
    }
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
