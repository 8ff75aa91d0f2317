#include "paraconvex/retraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paraconvex/parallel.hpp"
#include "paraconvex/rng.hpp"

namespace paraconvex {

namespace {

class ConstantRule final : public RetractionOperator::Impl {
 public:
  IterationResult evaluate(const RetractionOperator& self, const Point& x) const override {
    IterationResult res;
    res.point = self.target()[0];
    res.index = 0;
    res.trace.iterates = {x, res.point};
    res.trace.step_norms = {distance(x, res.point)};
    return res;
  }
  std::string_view kind() const override { return "constant"; }
};

class DirectRule final : public RetractionOperator::Impl {
 public:
  IterationResult evaluate(const RetractionOperator& self, const Point& x) const override {
    const double d = self.target().index().nearest(x).distance;
    return iterate_to_member(self.target(), x, 2.0 * d, self.schedule());
  }
  std::string_view kind() const override { return "direct"; }
};

}  // namespace

RetractionOperator::RetractionOperator(PointCloud target, IterationSchedule schedule, BoundingBox working_box,
                                       double measured_alpha, std::shared_ptr<const Impl> impl, std::string label)
    : target_(std::move(target)),
      schedule_(schedule),
      box_(working_box),
      alpha_(measured_alpha),
      impl_(std::move(impl)),
      label_(std::move(label)) {
  schedule_.validate();
  if (!impl_) throw Error(ErrorKind::invalid_argument, "RetractionOperator: missing evaluation rule");
}

bool RetractionOperator::in_box(const Point& x) const noexcept {
  return x.dim() == target_.dim() && box_.contains(x, 1e-9 * std::max(1.0, box_.diagonal()));
}

IterationResult RetractionOperator::evaluate(const Point& x) const {
  if (!in_box(x)) throw Error(ErrorKind::invalid_argument, "retraction: point outside the working box", x);
  const auto hit = target_.index().nearest(x);
  if (hit.distance <= kDefaultTolerances.dup) {
    IterationResult res;
    res.point = target_[hit.index];
    res.index = hit.index;
    res.trace.iterates.push_back(x);
    return res;
  }
  return impl_->evaluate(*this, x);
}

RetractionOperator build_retraction(const PointCloud& cloud, double beta, const RetractionOptions& options) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::invalid_argument, "build_retraction: beta must lie in (0, 1)");
  if (!(options.box_inflation >= 2.0)) {
    throw Error(ErrorKind::invalid_argument, "build_retraction: box inflation must be at least 2");
  }
  IterationSchedule schedule = banach_schedule(beta, options.kappa);
  schedule.tol = options.tol;
  const BoundingBox box = options.working_box ? *options.working_box : cloud.bounds().inflated(options.box_inflation);
  if (cloud.size() == 1) {
    return RetractionOperator(cloud, schedule, box, 0.0, std::make_shared<ConstantRule>(), cloud.label());
  }
  double alpha = 0.0;
  if (options.alpha_hat) {
    alpha = *options.alpha_hat;
    if (!(beta > alpha)) {
      throw Error(ErrorKind::precondition_failed, "build_retraction: beta does not exceed the measured alpha");
    }
  } else {
    const SamplingPlan plan = options.plan ? *options.plan : default_plan(cloud);
    const NonconvexityProfile profile = nonconvexity_function(cloud, plan);
    const ProfileEntry* worst = nullptr;
    for (const auto& e : profile.entries) {
      if (e.present && (!worst || e.alpha_hat > worst->alpha_hat)) worst = &e;
    }
    alpha = worst ? worst->alpha_hat : 0.0;
    if (!(beta > alpha)) {
      throw Error(ErrorKind::precondition_failed, "build_retraction: beta does not exceed the measured alpha",
                  worst ? std::optional<Point>(worst->witness_point.point) : std::nullopt);
    }
  }
  return RetractionOperator(cloud, schedule, box, alpha, std::make_shared<DirectRule>(), cloud.label());
}

RetractionOperator build_retraction(const PointCloud& cloud, double beta, double box_inflation) {
  RetractionOptions options;
  options.box_inflation = box_inflation;
  return build_retraction(cloud, beta, options);
}

std::vector<double> default_eps_grid(const RetractionOperator& r) {
  double diam = r.target().diameter();
  if (diam == 0.0) diam = 1.0;
  return {0.5 * diam, 0.2 * diam, 0.1 * diam, 0.05 * diam, 0.02 * diam, 0.01 * diam};
}

std::vector<Point> diagnostic_queries(const RetractionOperator& r, std::size_t count, std::uint64_t seed) {
  const PointCloud& cloud = r.target();
  const BoundingBox& box = r.working_box();
  const std::size_t dim = cloud.dim();
  double diam = cloud.diameter();
  if (diam == 0.0) diam = 1.0;
  std::vector<Point> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(stream_id(seed, {0xd1a6, i}));
    Point x = Point::zero(dim);
    bool placed = false;
    if (i % 2 == 0) {
      const Point& p = cloud[rng.below(cloud.size())];
      Point u = Point::zero(dim);
      double len = 0.0;
      while (len < 1e-12) {
        for (std::size_t k = 0; k < dim; ++k) u[k] = rng.normal();
        len = norm(u);
      }
      const double offset = diam * std::pow(10.0, rng.uniform(-4.0, -0.5));
      x = p + u * (offset / len);
      placed = box.contains(x);
    }
    if (!placed) {
      for (std::size_t k = 0; k < dim; ++k) x[k] = rng.uniform(box.lo[k], box.hi[k]);
    }
    out[i] = x;
  }
  return out;
}

UniformityReport retraction_diagnostics(const RetractionOperator& r, const std::vector<double>& eps_grid,
                                        std::size_t sample_count, std::uint64_t seed, double slack) {
  for (double e : eps_grid) {
    if (!(e > 0.0)) throw Error(ErrorKind::invalid_argument, "retraction_diagnostics: eps values must be positive");
  }
  const PointCloud& cloud = r.target();
  const std::vector<Point> xs = diagnostic_queries(r, sample_count, seed);
  struct Sample {
    double d = 0.0;
    double moved = 0.0;
    double membership = 0.0;
    double lipschitz = 0.0;
    bool idempotent = true;
    bool limited = false;
  };
  std::vector<Sample> samples(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const Point& x = xs[i];
    Sample& s = samples[i];
    s.d = cloud.index().nearest(x).distance;
    const IterationResult res = r.evaluate(x);
    s.limited = res.trace.resolution_limited;
    s.moved = distance(x, res.point);
    s.membership = cloud.index().nearest(res.point).distance;
    s.idempotent = r(res.point) == res.point;
    Rng rng(stream_id(seed, {0x11b5, i}));
    std::size_t anchors[4] = {cloud.index().nearest(x).index, rng.below(cloud.size()), rng.below(cloud.size()),
                              rng.below(cloud.size())};
    for (std::size_t a : anchors) {
      const double base = distance(cloud[a], x);
      if (base > 0.0) s.lipschitz = std::max(s.lipschitz, distance(cloud[a], res.point) / base);
    }
  });

  UniformityReport report;
  report.sample_count = xs.size();
  report.lipschitz_bound = 1.0 + r.certified_C();
  for (const Sample& s : samples) {
    report.lipschitz_at_P_ratio = std::max(report.lipschitz_at_P_ratio, s.lipschitz);
    if (s.d > 0.0) report.displacement_ratio = std::max(report.displacement_ratio, s.moved / s.d);
    report.max_membership_error = std::max(report.max_membership_error, s.membership);
    if (!s.idempotent) ++report.idempotence_failures;
    if (s.limited) ++report.resolution_limited;
  }
  report.lipschitz_ok = report.lipschitz_at_P_ratio <= report.lipschitz_bound * (1.0 + slack);

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a].d < samples[b].d; });
  const double box_scale = r.working_box().diagonal();
  for (double eps : eps_grid) {
    UniformityRow row{eps, box_scale};
    for (std::size_t i : order) {
      if (!(samples[i].moved < eps)) {
        row.delta = samples[i].d;
        break;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace paraconvex
