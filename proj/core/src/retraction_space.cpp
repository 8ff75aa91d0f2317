#include "paraconvex/retraction_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paraconvex/parallel.hpp"
#include "paraconvex/rng.hpp"

namespace paraconvex {

namespace {

void require_simplex(std::span<const double> w, std::size_t expected, const char* what) {
  if (w.size() != expected) throw Error(ErrorKind::invalid_argument, std::string(what) + ": one weight per term");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= -kDefaultTolerances.weight) || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument, std::string(what) + ": weights must be nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorKind::invalid_argument, std::string(what) + ": weights must sum to 1");
}

bool same_points(const PointCloud& a, const PointCloud& b) {
  return &a.points() == &b.points() || a.points() == b.points();
}

BoundingBox box_of(std::span<const Point> pts) {
  BoundingBox box{pts[0], pts[0]};
  for (const Point& p : pts) box = box.merged(BoundingBox{p, p});
  return box;
}

class ReprojectedRule final : public RetractionOperator::Impl {
 public:
  ReprojectedRule(FunctionOnBox q, double gamma_slack) : q_(std::move(q)), slack_(gamma_slack) {}

  IterationResult evaluate(const RetractionOperator& self, const Point& x) const override {
    return evaluate_with(self, x, q_.evaluate(x));
  }

  IterationResult evaluate_with(const RetractionOperator& self, const Point& x, const FunctionValue& fv) const {
    const PointCloud& cloud = self.target();
    const auto hit = cloud.index().nearest(x);
    if (hit.distance <= kDefaultTolerances.dup) return member(cloud, hit.index, x);
    const auto qhit = cloud.index().nearest(fv.value);
    if (qhit.distance <= kDefaultTolerances.dup) return member(cloud, qhit.index, x);
    if (std::isnan(fv.spread)) {
      throw Error(ErrorKind::invalid_argument, "reprojection: the function carries no Chebyshev radius", x);
    }
    const double rho = fv.spread + slack_;
    const double beta = self.beta();
    if (!(qhit.distance < beta * rho)) {
      throw Error(ErrorKind::precondition_failed, "reprojection: dist(Q(x), P) >= beta * rho(x)", x);
    }
    return iterate_to_member(cloud, fv.value, beta * rho, self.schedule());
  }

  std::string_view kind() const override { return "reprojected"; }

 private:
  static IterationResult member(const PointCloud& cloud, std::size_t idx, const Point& x) {
    IterationResult res;
    res.point = cloud[idx];
    res.index = idx;
    res.trace.iterates.push_back(x);
    return res;
  }

  FunctionOnBox q_;
  double slack_;
};

class RepairedRule final : public RetractionOperator::Impl {
 public:
  RepairedRule(RetractionOperator previous, double radius) : previous_(std::move(previous)), radius_(radius) {}

  IterationResult evaluate(const RetractionOperator& self, const Point& x) const override {
    return evaluate_from(self, x, previous_(x));
  }

  IterationResult evaluate_from(const RetractionOperator& self, const Point& x, const Point& y) const {
    const PointCloud& cloud = self.target();
    IterationResult res;
    auto hit = cloud.index().nearest(x);
    if (hit.distance > kDefaultTolerances.dup) hit = cloud.index().nearest(y);
    if (hit.distance <= kDefaultTolerances.dup) {
      res.point = cloud[hit.index];
      res.index = hit.index;
      res.trace.iterates.push_back(x);
      return res;
    }
    if (!(hit.distance < radius_)) {
      throw Error(ErrorKind::precondition_failed, "family repair: previous value is not within the repair radius", x);
    }
    return iterate_to_member(cloud, y, radius_, self.schedule());
  }

  const RetractionOperator& previous() const noexcept { return previous_; }
  std::string_view kind() const override { return "repaired"; }

 private:
  RetractionOperator previous_;
  double radius_;
};

}  // namespace

ProbeGrid make_probe_grid(const BoundingBox& box, std::size_t per_axis, std::span<const PointCloud> include) {
  if (per_axis == 0 && include.empty()) throw Error(ErrorKind::invalid_argument, "probe grid would be empty");
  ProbeGrid grid;
  grid.density = static_cast<double>(per_axis);
  const std::size_t dim = box.lo.dim();
  if (per_axis > 0) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < dim; ++k) total *= per_axis;
    for (std::size_t i = 0; i < total; ++i) {
      Point p = Point::zero(dim);
      std::size_t rem = i;
      for (std::size_t k = 0; k < dim; ++k) {
        const double t = (static_cast<double>(rem % per_axis) + 0.5) / static_cast<double>(per_axis);
        p[k] = box.lo[k] + t * (box.hi[k] - box.lo[k]);
        rem /= per_axis;
      }
      grid.probes.push_back(p);
    }
  }
  for (const PointCloud& c : include) {
    grid.probes.insert(grid.probes.end(), c.points().begin(), c.points().end());
  }
  return grid;
}

ProbeGrid make_probe_grid(const RetractionOperator& r, std::size_t per_axis) {
  const PointCloud clouds[] = {r.target()};
  return make_probe_grid(r.working_box(), per_axis, clouds);
}

FunctionOnBox FunctionOnBox::from_retraction(const RetractionOperator& r) {
  return FunctionOnBox([r](const Point& x) { return FunctionValue{r(x), 0.0}; }, r.label());
}

FunctionOnBox FunctionOnBox::constant(const Point& c, std::string label) {
  return FunctionOnBox([c](const Point&) { return FunctionValue{c, 0.0}; }, std::move(label));
}

double sup_distance(const FunctionOnBox& f, const FunctionOnBox& g, const ProbeGrid& probes) {
  std::vector<double> d(probes.probes.size(), 0.0);
  parallel_for(d.size(), [&](std::size_t i) { d[i] = distance(f(probes.probes[i]), g(probes.probes[i])); });
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

FunctionOnBox combine_retractions(const std::vector<RetractionOperator>& rs, std::span<const double> weights) {
  if (rs.empty()) throw Error(ErrorKind::invalid_argument, "combine_retractions: no operators");
  require_simplex(weights, rs.size(), "combine_retractions");
  for (const auto& r : rs) {
    if (!same_points(r.target(), rs[0].target())) {
      throw Error(ErrorKind::invalid_argument, "combine_retractions: operators retract onto different sets");
    }
  }
  std::vector<double> w(weights.begin(), weights.end());
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return FunctionOnBox(
      [rs, w](const Point& x) {
        std::vector<Point> vals;
        Point q = Point::zero(x.dim());
        for (std::size_t i = 0; i < rs.size(); ++i) {
          if (w[i] <= 0.0) continue;
          const Point v = rs[i](x);
          q += v * w[i];
          vals.push_back(v);
        }
        return FunctionValue{q, min_enclosing_ball(vals).radius};
      },
      "combination");
}

namespace {

// `cached`, when given, holds Q at every probe.
ReprojectionResult reproject_impl(const FunctionOnBox& q, const PointCloud& cloud, double beta, double gamma_slack,
                                  const ProbeGrid& probes, double kappa, double tol,
                                  const std::vector<FunctionValue>* cached) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::invalid_argument, "reprojection: beta must lie in (0, 1)");
  if (!(gamma_slack >= 0.0)) throw Error(ErrorKind::invalid_argument, "reprojection: gamma slack must be nonnegative");
  if (probes.probes.empty()) throw Error(ErrorKind::invalid_argument, "reprojection: empty probe grid");
  IterationSchedule schedule = banach_schedule(beta, kappa);
  schedule.tol = tol;
  schedule.slack = gamma_slack;
  const BoundingBox box = box_of(probes.probes).merged(cloud.bounds());
  auto rule = std::make_shared<ReprojectedRule>(q, gamma_slack);
  RetractionOperator op(cloud, schedule, box, 0.0, rule, "reprojected");

  const std::size_t n = probes.probes.size();
  std::vector<double> spread(n, 0.0);
  std::vector<double> moved(n, 0.0);
  std::vector<char> limited(n, 0);
  std::vector<char> failed(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const Point& x = probes.probes[i];
    const FunctionValue fv = cached ? (*cached)[i] : q.evaluate(x);
    spread[i] = std::isnan(fv.spread) ? 0.0 : fv.spread;
    try {
      const IterationResult r = rule->evaluate_with(op, x, fv);
      moved[i] = distance(fv.value, r.point);
      limited[i] = r.trace.resolution_limited;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition_failed) throw;
      failed[i] = 1;
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) {
      throw Error(ErrorKind::precondition_failed, "reprojection: dist(Q(x), P) >= beta * rho(x) at a probe",
                  probes.probes[i]);
    }
  }
  ReprojectionResult out;
  out.retraction = op;
  out.max_spread = *std::max_element(spread.begin(), spread.end());
  out.max_rho = out.max_spread + gamma_slack;
  out.bound = beta / (1.0 - beta) * out.max_rho * (1.0 + schedule.tau_inflate) + tol * out.max_rho;
  out.sup_distance = *std::max_element(moved.begin(), moved.end());
  out.resolution_limited = static_cast<std::size_t>(std::count(limited.begin(), limited.end(), 1));
  return out;
}

}  // namespace

ReprojectionResult reproject_to_retraction(const FunctionOnBox& q, const PointCloud& cloud, double beta,
                                           double gamma_slack, const ProbeGrid& probes, double kappa, double tol) {
  return reproject_impl(q, cloud, beta, gamma_slack, probes, kappa, tol, nullptr);
}

SpaceEstimate estimate_space_paraconvexity(const PointCloud& cloud, double alpha_hat, std::size_t ensemble,
                                           const ProbeGrid& probes, std::uint64_t seed, const EnsembleOptions& options) {
  if (ensemble < 2) throw Error(ErrorKind::invalid_argument, "estimate_space_paraconvexity: ensemble must be >= 2");
  std::vector<std::pair<double, double>> knobs;
  for (double off : options.beta_offsets) {
    const double beta = alpha_hat + off;
    if (!(beta < 1.0)) continue;
    for (double kappa : options.kappas) knobs.emplace_back(beta, kappa);
  }
  if (knobs.size() > ensemble) knobs.resize(ensemble);
  if (knobs.size() < 2) {
    throw Error(ErrorKind::precondition_failed, "estimate_space_paraconvexity: fewer than two admissible (beta, kappa)");
  }
  std::vector<RetractionOperator> ops;
  for (const auto& [beta, kappa] : knobs) {
    RetractionOptions ro;
    ro.alpha_hat = alpha_hat;
    ro.kappa = kappa;
    ro.working_box = box_of(probes.probes).merged(cloud.bounds());
    ops.push_back(build_retraction(cloud, beta, ro));
  }

  SpaceEstimate out;
  out.ensemble_size = ops.size();
  out.gamma_slack = options.gamma_slack ? *options.gamma_slack : 1e-9 * cloud.diameter();
  out.beta = alpha_hat + options.reproject_beta_offset;
  if (!(out.beta < 1.0)) {
    throw Error(ErrorKind::precondition_failed, "estimate_space_paraconvexity: reprojection beta reaches 1");
  }

  const std::size_t n = probes.probes.size();
  const std::size_t m = ops.size();
  std::vector<Point> vals(n * m);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t k = 0; k < m; ++k) vals[i * m + k] = ops[k](probes.probes[i]);
  });
  bool identical = true;
  for (std::size_t i = 0; i < n && identical; ++i) {
    for (std::size_t k = 1; k < m; ++k) {
      if (distance(vals[i * m + k], vals[i * m]) > 1e-12) identical = false;
    }
  }
  if (identical) {
    out.degenerate = true;
    return out;
  }

  for (std::size_t s = 0; s < options.combinations; ++s) {
    Rng rng(stream_id(seed, {0x5ace, s}));
    const std::size_t size = 2 + rng.below(m - 1);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < size; ++k) std::swap(perm[k], perm[k + rng.below(m - k)]);
    std::vector<std::size_t> members(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(members.begin(), members.end());
    std::vector<double> w(size);
    double total = 0.0;
    for (double& v : w) total += (v = rng.exponential());
    for (double& v : w) v /= total;

    // Q and its Chebyshev radii from the cached values.
    std::vector<FunctionValue> qv(n);
    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Point> pts;
      Point q = Point::zero(cloud.dim());
      for (std::size_t k = 0; k < size; ++k) {
        const Point& v = vals[i * m + members[k]];
        pts.push_back(v);
        q += v * w[k];
      }
      qv[i] = FunctionValue{q, min_enclosing_ball(pts).radius};
      radius = std::max(radius, qv[i].spread);
    }
    SpaceSample sample;
    sample.members = members;
    sample.weights = w;
    if (radius == 0.0) {
      out.samples.push_back(sample);
      continue;
    }
    // All members lie in the open sup-metric ball around the pointwise
    // Chebyshev center once the radius is nudged past the maximum.
    sample.radius = radius * (1.0 + 1e-9);

    std::vector<RetractionOperator> chosen;
    for (std::size_t k : members) chosen.push_back(ops[k]);
    const FunctionOnBox qf = combine_retractions(chosen, w);
    const ReprojectionResult rp = reproject_impl(qf, cloud, out.beta, out.gamma_slack, probes, 2.0, 1e-8, &qv);
    sample.max_rho = rp.max_rho;
    sample.sup_distance = rp.sup_distance;
    sample.bound = rp.bound;
    sample.ratio = rp.sup_distance / sample.radius;
    out.ratio = std::max(out.ratio, sample.ratio);
    out.samples.push_back(sample);
  }
  return out;
}

FamilyOfSets FamilyOfSets::from_sets(std::vector<double> params, std::vector<PointCloud> sets) {
  FamilyOfSets f;
  f.params = std::move(params);
  f.sets = std::move(sets);
  for (std::size_t i = 0; i + 1 < f.sets.size(); ++i) {
    f.hausdorff_steps.push_back(hausdorff_distance(f.sets[i], f.sets[i + 1]));
  }
  f.validate();
  return f;
}

void FamilyOfSets::validate(double tau_geo) const {
  if (sets.empty() || params.size() != sets.size() || hausdorff_steps.size() + 1 != sets.size()) {
    throw Error(ErrorKind::invalid_argument, "family: inconsistent lengths");
  }
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (!(params[i + 1] > params[i])) throw Error(ErrorKind::invalid_argument, "family: parameters must increase");
    if (std::abs(hausdorff_steps[i] - hausdorff_distance(sets[i], sets[i + 1])) > tau_geo) {
      throw Error(ErrorKind::invalid_argument, "family: recorded Hausdorff step disagrees with the sets");
    }
  }
}

RetractionFamily build_retraction_family(const FamilyOfSets& family, double beta, const FamilyOptions& options) {
  family.validate();
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::invalid_argument, "family: beta must lie in (0, 1)");
  RetractionFamily out;
  if (options.alpha_hat) {
    out.alpha_hat = *options.alpha_hat;
  } else {
    const SamplingPlan plan = options.plan ? *options.plan : default_plan(family.sets[0]);
    out.alpha_hat = nonconvexity_function(family.sets[0], plan).max_alpha();
  }
  if (!(beta > out.alpha_hat)) {
    throw Error(ErrorKind::precondition_failed, "family: beta does not exceed the measured alpha");
  }
  if (out.alpha_hat >= 0.5) {
    out.warnings.push_back("measured alpha_hat >= 1/2: the continuous choice of retractions is only guaranteed below 1/2");
  }
  if (options.check_members) {
    const double level = std::max(0.0, beta - options.margin);
    for (std::size_t t = 0; t < family.sets.size(); ++t) {
      const SamplingPlan plan = options.plan ? *options.plan : default_plan(family.sets[t]);
      const ParaconvexityVerdict v = check_paraconvexity(family.sets[t], level, false, plan);
      if (!v.holds) {
        throw Error(ErrorKind::precondition_failed,
                    "family: member " + std::to_string(t) + " is not paraconvex at beta - margin",
                    v.witness_point.point);
      }
    }
  }
  BoundingBox box = family.sets[0].bounds();
  for (const auto& s : family.sets) box = box.merged(s.bounds());
  box = box.inflated(options.box_inflation);

  RetractionOptions ro;
  ro.alpha_hat = out.alpha_hat;
  ro.kappa = options.kappa;
  ro.working_box = box;
  out.operators.push_back(build_retraction(family.sets[0], beta, ro));
  out.repair_radii.push_back(0.0);
  for (std::size_t t = 1; t < family.sets.size(); ++t) {
    const double radius = family.hausdorff_steps[t - 1] * (1.0 + 1e-6);
    IterationSchedule schedule = banach_schedule(beta, options.kappa);
    auto rule = std::make_shared<RepairedRule>(out.operators.back(), radius);
    out.operators.emplace_back(family.sets[t], schedule, box, out.alpha_hat, rule, family.sets[t].label());
    out.repair_radii.push_back(radius);
  }
  return out;
}

std::vector<Point> evaluate_family(const std::vector<RetractionOperator>& operators, const Point& x) {
  std::vector<Point> out;
  out.reserve(operators.size());
  for (std::size_t t = 0; t < operators.size(); ++t) {
    const auto* rule = dynamic_cast<const RepairedRule*>(&operators[t].impl());
    if (t > 0 && rule && &rule->previous().impl() == &operators[t - 1].impl()) {
      if (!operators[t].in_box(x)) throw Error(ErrorKind::invalid_argument, "retraction: point outside the working box", x);
      out.push_back(rule->evaluate_from(operators[t], x, out.back()).point);
    } else {
      out.push_back(operators[t](x));
    }
  }
  return out;
}

std::vector<ModulusRow> continuity_modulus(const FamilyOfSets& family, const std::vector<RetractionOperator>& operators,
                                           const ProbeGrid& probes, double alpha_hat, double slack) {
  if (operators.size() != family.sets.size()) {
    throw Error(ErrorKind::invalid_argument, "continuity_modulus: one operator per family member required");
  }
  const std::size_t n = probes.probes.size();
  const std::size_t T = operators.size();
  std::vector<Point> vals(n * T);
  parallel_for(n, [&](std::size_t i) {
    const auto v = evaluate_family(operators, probes.probes[i]);
    std::copy(v.begin(), v.end(), vals.begin() + static_cast<std::ptrdiff_t>(i * T));
  });
  std::vector<ModulusRow> rows;
  for (std::size_t t = 0; t + 1 < T; ++t) {
    ModulusRow row;
    row.index = t;
    row.delta = family.hausdorff_steps[t];
    for (std::size_t i = 0; i < n; ++i) {
      row.sup_dist = std::max(row.sup_dist, distance(vals[i * T + t], vals[i * T + t + 1]));
    }
    if (row.delta > 0.0) {
      row.ratio = row.sup_dist * (1.0 - alpha_hat) / row.delta;
    } else {
      row.ratio = row.sup_dist > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    row.flagged = row.ratio > 1.0 + slack;
    rows.push_back(row);
  }
  return rows;
}

Point sigma_convex_combination(const RetractionOperator& r, std::span<const Point> ys, std::span<const double> weights,
                               double tol) {
  if (ys.empty()) throw Error(ErrorKind::invalid_argument, "sigma_convex_combination: no points");
  require_simplex(weights, ys.size(), "sigma_convex_combination");
  Point z = Point::zero(r.target().dim());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    require_same_dim(ys[i], r.target().dim(), "sigma_convex_combination");
    if (!(dist_to_cloud(ys[i], r.target()) <= tol)) {
      throw Error(ErrorKind::precondition_failed, "sigma_convex_combination: point not in the target set", ys[i]);
    }
    z += ys[i] * weights[i];
  }
  return r(z);
}

bool pairwise_disjoint(std::span<const PointCloud> values, double tau_dup) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      for (const Point& p : values[i].points()) {
        if (dist_to_cloud(p, values[j]) <= tau_dup) return false;
      }
    }
  }
  return true;
}

}  // namespace paraconvex
