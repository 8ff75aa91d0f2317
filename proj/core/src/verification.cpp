#include "paraconvex/verification.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>

#include "json.hpp"
#include "paraconvex/artifacts.hpp"
#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/retraction.hpp"
#include "paraconvex/retraction_space.hpp"
#include "paraconvex/rng.hpp"
#include "paraconvex/scenes.hpp"

namespace paraconvex {

namespace {

struct Artifact {
  std::string name;
  std::string content;
};

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;
  std::vector<Artifact> artifacts;

  void check(bool ok, std::string note) {
    passed = passed && ok;
    notes.push_back((ok ? "" : "FAILED ") + std::move(note));
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome()> run;
};

std::string g(double v) { return fmt::format("{:.6g}", v); }

struct SceneData {
  std::string key;
  PointCloud cloud;
  NonconvexityProfile profile;
  double alpha = 0.0;
};

// Scenes shared by several criteria, measured once per run.
class Context {
 public:
  explicit Context(const RunConfig& c) : config(c) {}

  const RunConfig& config;

  SamplingPlan curve_plan(const PointCloud& cloud) const {
    SamplingPlan plan = default_plan(cloud, config.seed);
    plan.ball_center_count = config.ball_center_count;
    plan.hull_sample_count = config.hull_sample_count;
    return plan;
  }

  const SceneData& semicircle() {
    if (!semicircle_) semicircle_ = measure("semicircle", resolve_scene("semicircle"));
    return *semicircle_;
  }

  // The x range starts at 0.2: closer to the origin the sampled curve is
  // nearly 1-nonconvex and no beta = alpha_hat + margin stays below 1.
  const SceneData& sin_reciprocal() {
    if (!sin_) {
      Scene s = resolve_scene("sin_reciprocal");
      s.params["x_min"] = 0.2;
      sin_ = measure("sin_reciprocal", s);
    }
    return *sin_;
  }

  std::uint64_t seed_for(int criterion, std::uint64_t tag = 0) const {
    return stream_id(config.seed, {0xacce97, static_cast<std::uint64_t>(criterion), tag});
  }

 private:
  SceneData measure(const std::string& key, const Scene& scene) {
    SceneData d{key, generate_scene(scene), {}, 0.0};
    d.profile = nonconvexity_function(d.cloud, curve_plan(d.cloud));
    d.alpha = d.profile.max_alpha();
    return d;
  }

  std::optional<SceneData> semicircle_;
  std::optional<SceneData> sin_;
};

std::string csv_of(const CsvTable& t) { return to_csv(t); }

// --- 1 ---------------------------------------------------------------------

Outcome constants_criterion() {
  Outcome out;
  std::vector<double> alphas;
  for (int k = 0; k <= 9; ++k) alphas.push_back(k / 10.0);
  double worst = 0.0;
  bool ordered = true;
  for (double a : alphas) {
    const ParaconvexityBounds b = phi_and_bounds(a);
    const double phi_ref = std::sqrt(2.0 * a - a * a);
    const double banach_ref = a / (1.0 - a);
    const double hilbert_ref = a * (1.0 + a * a) / (1.0 - a * a);
    worst = std::max({worst, std::abs(b.phi - phi_ref), std::abs(b.banach_bound - banach_ref),
                      std::abs(b.hilbert_bound - hilbert_ref)});
    if (a > 0.0 && !(b.hilbert_bound < b.banach_bound)) ordered = false;
  }
  out.check(worst <= 1e-12, "max deviation from closed forms " + g(worst));
  out.check(ordered, "hilbert bound strictly below banach bound for alpha > 0");
  out.artifacts.push_back({"constants.csv", csv_of(to_table(constants_rows(alphas)))});
  return out;
}

// --- 2 ---------------------------------------------------------------------

Outcome threshold_criterion() {
  Outcome out;
  const double a = threshold_root();
  const double residual = std::abs(a + a * a + a * a * a - 1.0);
  out.check(residual <= 1e-12, "root " + fmt::format("{:.15g}", a) + ", residual " + g(residual));
  out.check(a > 0.5436 && a < 0.5438, "root inside (0.5436, 0.5438)");
  out.check(a > 0.5, "root above 1/2");
  return out;
}

// --- 3 ---------------------------------------------------------------------

Outcome gamma_criterion() {
  Outcome out;
  CsvTable table{{"gamma", "n", "term", "excess"}, {}};
  for (double gm : {0.3, 0.5, 0.9}) {
    const GammaSequence seq = gamma_sequence(gm, 500);
    const double t = seq.fixed_point;
    // Strict decrease until the term equals the fixed point to rounding; constant afterwards.
    bool monotone = true;
    std::size_t plateau = seq.terms.size();
    for (std::size_t n = 0; n + 1 < seq.terms.size(); ++n) {
      const double a = seq.terms[n], b = seq.terms[n + 1];
      if (b < a) continue;
      const bool settled = b == a && std::abs(a - t) <= 4.0 * std::numeric_limits<double>::epsilon() * t;
      if (!settled) monotone = false;
      plateau = std::min(plateau, n + 1);
    }
    const double gap = std::abs(seq.terms.back() - t);
    out.check(monotone, fmt::format("gamma {}: decreasing (settles at n = {})", gm, plateau));
    out.check(gap <= 1e-9, fmt::format("gamma {}: |gamma_500 - t| = {}", gm, g(gap)));
    for (std::size_t n = 0; n < seq.terms.size(); ++n) {
      table.rows.push_back({format_number(gm), std::to_string(n + 1), format_number(seq.terms[n]),
                            format_number(seq.terms[n] - t)});
    }
  }
  out.artifacts.push_back({"gamma_sequences.csv", csv_of(table)});
  return out;
}

// --- 4 ---------------------------------------------------------------------

Outcome convexity_criterion(Context& ctx) {
  const RunConfig& cfg = ctx.config;
  Outcome out;
  Scene scene = resolve_scene("convex_polygon");
  scene.density = cfg.polygon_density;
  const PointCloud cloud = generate_scene(scene);
  SamplingPlan plan = default_plan(cloud, cfg.seed);
  plan.ball_center_count = cfg.polygon_ball_centers;
  plan.hull_sample_count = cfg.polygon_hull_samples;
  const NonconvexityProfile profile = nonconvexity_function(cloud, plan);
  const double alpha = profile.max_alpha();
  out.check(alpha <= 0.05, fmt::format("{} points, profile max {}", cloud.size(), g(alpha)));
  out.artifacts.push_back({"profile_convex_polygon.csv", csv_of(to_table(profile_rows("convex_polygon", profile)))});

  CsvTable oracle{{"r", "estimate", "oracle"}, {}};
  double worst_gap = 0.0;
  for (std::size_t i : {std::size_t{10}, std::size_t{14}}) {
    const ProfileEntry& e = profile.entries.at(i);
    const double o = brute_force_alpha_oracle(cloud, e.radius, e.radius / 20.0);
    worst_gap = std::max(worst_gap, std::abs(o - e.alpha_hat));
    oracle.rows.push_back({format_number(e.radius), format_number(e.alpha_hat), format_number(o)});
  }
  out.check(worst_gap <= 0.02, "estimator vs grid oracle gap " + g(worst_gap));
  out.artifacts.push_back({"oracle_convex_polygon.csv", csv_of(oracle)});

  // Any finite sample of a convex region has holes of the lattice size, and
  // a reprojected combination has to cross them; the slack keeps the
  // reprojection well posed at that scale.
  const double beta = alpha + cfg.beta_margin;
  RetractionOptions ro;
  ro.alpha_hat = alpha;
  ro.tol = cfg.tol;
  const RetractionOperator r = build_retraction(cloud, beta, ro);
  const ProbeGrid probes = make_probe_grid(r.working_box(), std::max<std::size_t>(cfg.probe_density / 2, 2), {});
  EnsembleOptions eo;
  eo.combinations = cfg.space_combinations;
  eo.gamma_slack = cloud.resolution() / beta;
  eo.reproject_beta_offset = cfg.beta_margin;
  const SpaceEstimate est = estimate_space_paraconvexity(cloud, alpha, cfg.ensemble, probes, ctx.seed_for(4), eo);
  out.check(est.ratio <= 1e-6, fmt::format("space estimate {} over {} retractions", g(est.ratio), est.ensemble_size));
  out.artifacts.push_back({"space_convex_polygon.csv", csv_of(to_table(est.samples))});
  return out;
}

// --- 5 ---------------------------------------------------------------------

void retraction_checks(Context& ctx, const SceneData& s, Outcome& out) {
  const RunConfig& cfg = ctx.config;
  out.artifacts.push_back({"profile_" + s.key + ".csv", csv_of(to_table(profile_rows(s.key, s.profile)))});
  const double beta = cfg.forced_beta ? *cfg.forced_beta : s.alpha + cfg.beta_margin;
  if (!(beta > s.alpha)) {
    const ProfileEntry* worst = nullptr;
    for (const auto& e : s.profile.entries) {
      if (e.present && (!worst || e.alpha_hat > worst->alpha_hat)) worst = &e;
    }
    throw Error(ErrorKind::precondition_failed,
                fmt::format("build_retraction on {}: beta {} does not exceed alpha_hat {}", s.key, g(beta), g(s.alpha)),
                worst ? std::optional<Point>(worst->witness_point.point) : std::nullopt);
  }
  RetractionOptions ro;
  ro.alpha_hat = s.alpha;
  ro.tol = cfg.tol;
  const RetractionOperator r = build_retraction(s.cloud, beta, ro);

  std::size_t moved_on_P = 0;
  for (const Point& p : s.cloud.points()) {
    if (!(r(p) == p)) ++moved_on_P;
  }
  const std::vector<Point> xs = diagnostic_queries(r, cfg.query_count, ctx.seed_for(5, s.key == "semicircle" ? 1 : 2));
  const double diam = s.cloud.diameter();
  const double C = r.certified_C();
  double membership = 0.0, displacement = 0.0, envelope = 0.0;
  std::size_t limited = 0;
  std::vector<FieldRow> field;
  for (const Point& x : xs) {
    const IterationResult res = r.evaluate(x);
    const double d = dist_to_cloud(x, s.cloud);
    const double moved = distance(x, res.point);
    membership = std::max(membership, dist_to_cloud(res.point, s.cloud));
    if (d > 0.0) displacement = std::max(displacement, moved / (C * d));
    const auto& tr = res.trace;
    double radius = tr.initial_radius;
    for (double step : tr.step_norms) {
      envelope = std::max(envelope, step / radius);
      radius *= beta;
    }
    if (tr.resolution_limited) ++limited;
    field.push_back({x[0], x[1], res.point[0], res.point[1], d, moved});
  }
  const std::string tag = s.key + ": ";
  out.check(moved_on_P == 0, tag + fmt::format("R(p) = p on all {} points", s.cloud.size()));
  out.check(membership <= 1e-6 * diam, tag + "max dist(R(x), P) " + g(membership));
  out.check(displacement <= 1.0 + 1e-3,
            tag + fmt::format("beta {} alpha_hat {}, max |x - R(x)| / (C d(x)) {}", g(beta), g(s.alpha), g(displacement)));
  out.check(envelope <= 1.0 + 1e-6, tag + "max step / (beta^n r0) " + g(envelope));
  if (limited) out.notes.push_back(tag + fmt::format("{} queries finished on a resolution snap", limited));
  out.artifacts.push_back({"retraction_" + s.key + ".csv", csv_of(to_table(field))});
  std::vector<FieldRow> shown(field.begin(), field.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(field.size(), 300)));
  out.artifacts.push_back({"retraction_" + s.key + ".svg", field_svg(s.cloud, shown, "retraction field: " + s.key)});
}

Outcome retraction_criterion(Context& ctx) {
  Outcome out;
  retraction_checks(ctx, ctx.semicircle(), out);
  retraction_checks(ctx, ctx.sin_reciprocal(), out);
  return out;
}

// --- 6 ---------------------------------------------------------------------

Outcome in_ball_criterion(Context& ctx) {
  Outcome out;
  const std::size_t n = ctx.config.in_ball_configurations;
  const InBallDistanceSearch s = search_in_ball_distance_counterexamples(n, ctx.seed_for(6));
  out.check(s.configurations == n, fmt::format("{} configurations", s.configurations));
  out.check(s.violations == 0, fmt::format("{} violations ({} near center, {} near boundary, worst excess {})",
                                           s.violations, s.near_center, s.near_boundary, g(s.worst_excess)));
  CsvTable t{{"configurations", "violations", "near_center", "near_boundary", "worst_excess"}, {}};
  t.rows.push_back({std::to_string(s.configurations), std::to_string(s.violations), std::to_string(s.near_center),
                    std::to_string(s.near_boundary), format_number(s.worst_excess)});
  out.artifacts.push_back({"in_ball_search.csv", csv_of(t)});
  return out;
}

// --- 7 ---------------------------------------------------------------------

Outcome space_criterion(Context& ctx) {
  const RunConfig& cfg = ctx.config;
  Outcome out;
  const SceneData& s = ctx.semicircle();
  RetractionOptions ro;
  ro.alpha_hat = s.alpha;
  const RetractionOperator base = build_retraction(s.cloud, s.alpha + cfg.beta_margin, ro);
  const ProbeGrid probes = make_probe_grid(base, cfg.probe_density);
  EnsembleOptions eo;
  eo.combinations = cfg.space_combinations;
  eo.reproject_beta_offset = cfg.beta_margin;
  const SpaceEstimate est = estimate_space_paraconvexity(s.cloud, s.alpha, cfg.ensemble, probes, ctx.seed_for(7), eo);
  const double beta = est.beta;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (const SpaceSample& smp : est.samples) {
    if (smp.radius == 0.0) continue;
    ++used;
    worst = std::max(worst, smp.sup_distance - (beta / (1.0 - beta) * smp.max_rho + 1e-6));
  }
  out.check(!est.degenerate && used > 0,
            fmt::format("{} retractions, {} combinations, {} probes", est.ensemble_size, used, probes.probes.size()));
  out.check(worst <= 0.0, "max of sup_distance - bound " + g(worst));
  const double limit = s.alpha / (1.0 - s.alpha) + 0.1;
  out.check(est.ratio <= limit, fmt::format("space estimate {} against {}", g(est.ratio), g(limit)));
  out.artifacts.push_back({"space_semicircle.csv", csv_of(to_table(est.samples))});
  return out;
}

// --- 8 ---------------------------------------------------------------------

Outcome family_criterion(Context& ctx) {
  const RunConfig& cfg = ctx.config;
  Outcome out;
  const SceneData& s = ctx.semicircle();
  SamplingPlan member_plan = default_plan(s.cloud, cfg.seed);
  member_plan.ball_center_count = std::max<std::size_t>(cfg.ball_center_count / 4, 1);
  member_plan.hull_sample_count = std::max<std::size_t>(cfg.hull_sample_count / 2, 1);

  double previous_max = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t refine : {std::size_t{1}, std::size_t{2}}) {
    const std::size_t steps = cfg.family_steps * refine;
    Scene scene = resolve_scene("semicircle");
    scene.family_sweep = FamilySweep{"angle", 0.0, M_PI / 2.0, steps};
    const FamilyOfSets family = generate_family(scene);
    FamilyOptions fo;
    fo.margin = cfg.family_margin;
    fo.alpha_hat = s.alpha;
    fo.plan = member_plan;
    const RetractionFamily rf = build_retraction_family(family, s.alpha + cfg.beta_margin, fo);
    const ProbeGrid probes = make_probe_grid(rf.operators.front().working_box(), cfg.probe_density, {});
    const std::vector<ModulusRow> rows = continuity_modulus(family, rf.operators, probes, rf.alpha_hat);
    double max_sup = 0.0, max_ratio = 0.0;
    for (const ModulusRow& row : rows) {
      max_sup = std::max(max_sup, row.sup_dist);
      max_ratio = std::max(max_ratio, row.ratio);
      if (refine == 1) {
        xs.push_back(static_cast<double>(row.index));
        ys.push_back(row.ratio);
      }
    }
    out.check(max_ratio <= 1.1, fmt::format("{} steps: max ratio {}, max sup_dist {}", steps, g(max_ratio), g(max_sup)));
    if (refine == 2) {
      out.check(max_sup < previous_max, fmt::format("refinement lowers max sup_dist {} -> {}", g(previous_max), g(max_sup)));
    }
    previous_max = max_sup;
    out.artifacts.push_back({fmt::format("modulus_{}.csv", steps), csv_of(to_table(rows))});
  }
  out.artifacts.push_back({"modulus.svg", line_plot_svg(xs, ys, "continuity modulus, rotated semicircles", "step",
                                                        "sup_dist (1 - alpha) / delta", 1.1)});
  return out;
}

// --- 9 ---------------------------------------------------------------------

Outcome sigma_criterion(Context& ctx) {
  const RunConfig& cfg = ctx.config;
  Outcome out;
  const SceneData& s = ctx.semicircle();
  RetractionOptions ro;
  ro.alpha_hat = s.alpha;
  const RetractionOperator r = build_retraction(s.cloud, s.alpha + cfg.beta_margin, ro);
  std::size_t failures = 0, far = 0, in_hull = 0, mismatched = 0;
  CsvTable t{{"draw", "count", "ex", "ey", "sx", "sy", "dist_to_P", "hull_in_P"}, {}};
  for (std::size_t k = 0; k < cfg.sigma_draws; ++k) {
    Rng rng(stream_id(ctx.seed_for(9), {k}));
    const std::size_t count = 2 + rng.below(3);
    // One draw in ten repeats a single point, so its hull lies in P.
    const bool repeated = rng.below(10) == 0;
    std::vector<Point> ys;
    std::vector<double> w;
    double total = 0.0;
    const std::size_t first = rng.below(s.cloud.size());
    for (std::size_t i = 0; i < count; ++i) {
      ys.push_back(s.cloud[repeated ? first : rng.below(s.cloud.size())]);
      w.push_back(rng.exponential());
      total += w.back();
    }
    for (double& v : w) v /= total;
    Point e = Point::zero(2);
    for (std::size_t i = 0; i < count; ++i) e += ys[i] * w[i];
    bool hull_in_P = true;
    for (const Point& y : ys) hull_in_P = hull_in_P && y == ys.front();
    Point p;
    try {
      p = sigma_convex_combination(r, ys, w);
    } catch (const Error&) {
      ++failures;
      continue;
    }
    const double d = dist_to_cloud(p, s.cloud);
    if (d > 1e-6) ++far;
    if (hull_in_P) {
      ++in_hull;
      if (distance(p, e) > cfg.tolerances.geo) ++mismatched;
    }
    t.rows.push_back({std::to_string(k), std::to_string(count), format_number(e[0]), format_number(e[1]),
                      format_number(p[0]), format_number(p[1]), format_number(d), hull_in_P ? "1" : "0"});
  }
  out.check(failures == 0, fmt::format("defined on all {} draws", cfg.sigma_draws - failures));
  out.check(far == 0, fmt::format("{} results farther than 1e-6 from P", far));
  out.check(in_hull > 0 && mismatched == 0,
            fmt::format("{} draws with hull in P, {} differ from the Euclidean combination", in_hull, mismatched));
  out.artifacts.push_back({"sigma_semicircle.csv", csv_of(t)});
  return out;
}

// --- suite -----------------------------------------------------------------

std::string join_notes(const std::vector<std::string>& notes) {
  std::string s;
  for (const auto& n : notes) {
    if (!s.empty()) s += "; ";
    s += n;
  }
  return s;
}

std::string describe(const Error& e) {
  std::string s = e.what();
  if (e.witness()) {
    const Point& w = *e.witness();
    s += " (witness";
    for (std::size_t i = 0; i < w.dim(); ++i) s += " " + g(w[i]);
    s += ")";
  }
  return s;
}

std::set<int> selected(const RunConfig& cfg) {
  std::set<int> ids;
  if (cfg.only.empty()) {
    for (int i = 1; i <= 10; ++i) ids.insert(i);
  } else {
    ids.insert(cfg.only.begin(), cfg.only.end());
  }
  return ids;
}

std::vector<std::filesystem::path> csv_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv" && entry.path().filename() != "criteria.csv") {
      out.push_back(entry.path().filename());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

VerificationReport run_criteria(const RunConfig& cfg, const std::set<int>& ids);

Outcome determinism_criterion(const RunConfig& cfg, const std::set<int>& ran) {
  Outcome out;
  std::set<int> ids;
  for (int i : ran) {
    if (i != 10) ids.insert(i);
  }
  if (ids.empty()) {
    for (int i = 1; i <= 9; ++i) ids.insert(i);
  }
  const std::filesystem::path scratch = cfg.output_dir / ".rerun";
  std::filesystem::remove_all(scratch);
  auto rerun = [&](const std::filesystem::path& dir) {
    RunConfig copy = cfg;
    copy.output_dir = dir;
    copy.determinism_rerun = false;
    run_criteria(copy, ids);
  };
  std::filesystem::path first = cfg.output_dir;
  if (ran.size() == 1) {
    first = scratch / "a";
    rerun(first);
  }
  const std::filesystem::path second = scratch / "b";
  rerun(second);
  const auto a = csv_files(first);
  const auto b = csv_files(second);
  std::size_t differing = 0;
  for (const auto& name : a) {
    if (read_text_file(first / name) != read_text_file(second / name)) ++differing;
  }
  std::filesystem::remove_all(scratch);
  out.check(!a.empty() && a == b, fmt::format("{} CSV files in each run", a.size()));
  out.check(differing == 0, fmt::format("{} files differ byte for byte", differing));
  return out;
}

VerificationReport run_criteria(const RunConfig& cfg, const std::set<int>& ids) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

  Context ctx(cfg);
  const std::vector<Criterion> all = {
      {1, "constants", 1.0, [] { return constants_criterion(); }},
      {2, "threshold root", 1.0, [] { return threshold_criterion(); }},
      {3, "gamma recursion", 1.0, [] { return gamma_criterion(); }},
      {4, "convexity baseline", 120.0, [&] { return convexity_criterion(ctx); }},
      {5, "retraction bound", 300.0, [&] { return retraction_criterion(ctx); }},
      {6, "in-ball distance bound", 120.0, [&] { return in_ball_criterion(ctx); }},
      {7, "reprojection bound", 600.0, [&] { return space_criterion(ctx); }},
      {8, "continuity modulus", 600.0, [&] { return family_criterion(ctx); }},
      {9, "sigma-convex combination", 60.0, [&] { return sigma_criterion(ctx); }},
  };

  VerificationReport report;
  report.seed = cfg.seed;
  std::set<std::string> written;
  std::set<int> ran;
  for (const Criterion& c : all) {
    if (!ids.count(c.id)) continue;
    ran.insert(c.id);
    CriterionResult res{c.id, c.name, false, "", "", 0.0, c.budget};
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
      res.passed = o.passed;
      res.detail = join_notes(o.notes);
    } catch (const Error& e) {
      res.error = std::string(to_string(e.kind()));
      res.detail = describe(e);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.passed && res.seconds > c.budget) {
      res.passed = false;
      res.detail += fmt::format("; FAILED runtime {:.1f} s over the {:.0f} s budget", res.seconds, c.budget);
    }
    for (const Artifact& a : o.artifacts) {
      write_text_file(cfg.output_dir / a.name, a.content);
      written.insert(a.name);
    }
    report.criteria.push_back(std::move(res));
  }

  if (ids.count(10) && cfg.determinism_rerun) {
    CriterionResult res{10, "determinism", false, "", "", 0.0, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    ran.insert(10);
    try {
      const Outcome o = determinism_criterion(cfg, ran);
      res.passed = o.passed;
      res.detail = join_notes(o.notes);
    } catch (const Error& e) {
      res.error = std::string(to_string(e.kind()));
      res.detail = describe(e);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.criteria.push_back(std::move(res));
  }

  CsvTable summary{{"id", "name", "passed", "error", "detail"}, {}};
  for (const auto& c : report.criteria) {
    summary.rows.push_back({std::to_string(c.id), c.name, c.passed ? "1" : "0", c.error, c.detail});
  }
  write_text_file(cfg.output_dir / "criteria.csv", to_csv(summary));
  written.insert("criteria.csv");
  written.insert("summary.json");
  report.files.assign(written.begin(), written.end());
  write_text_file(cfg.output_dir / "summary.json", report.summary_json());
  return report;
}

}  // namespace

void RunConfig::validate() const {
  const bool tolerances_ok = tolerances.dup > 0 && tolerances.geo > 0 && tolerances.proj > 0 &&
                             tolerances.weight > 0 && tolerances.verdict > 0 && tol > 0;
  if (!tolerances_ok) throw Error(ErrorKind::invalid_argument, "config: tolerances must be positive");
  if (!(beta_margin > 0.0) || !(family_margin > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "config: margins must be positive");
  }
  if (ball_center_count == 0 || hull_sample_count == 0 || polygon_density < 3 || polygon_ball_centers == 0 ||
      polygon_hull_samples == 0 || probe_density < 2 || query_count == 0 || in_ball_configurations == 0 ||
      sigma_draws == 0 || family_steps == 0 || ensemble < 2 || space_combinations == 0) {
    throw Error(ErrorKind::invalid_argument, "config: counts must be positive (ensemble >= 2, probe density >= 2)");
  }
  for (int id : only) {
    if (id < 1 || id > 10) throw Error(ErrorKind::invalid_argument, fmt::format("config: no criterion {}", id));
  }
  if (forced_beta && !(*forced_beta > 0.0 && *forced_beta < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "config: forced beta must lie in (0, 1)");
  }
}

bool VerificationReport::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::string VerificationReport::summary_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["passed"] = all_passed();
  j["criteria"] = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["detail"] = c.detail;
    if (!c.error.empty()) e["error"] = c.error;
    e["seconds"] = c.seconds;
    if (c.budget_seconds > 0) e["budget_seconds"] = c.budget_seconds;
    j["criteria"].push_back(e);
  }
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files) j["files"].push_back(f.string());
  return j.dump(2) + "\n";
}

VerificationReport run_verification_suite(const RunConfig& config) {
  return run_criteria(config, selected(config));
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("PARACONVEX_OUT"); env && *env) return env;
  return "paraconvex-out";
}

}  // namespace paraconvex
