#include "paraconvex/paraconvexity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "paraconvex/rng.hpp"
#include "sampling.hpp"

namespace paraconvex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum CenterCategory : std::uint64_t { kHalton = 1, kCloudPoint = 2, kMidpoint = 3, kSingleBall = 4 };

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

struct TaggedCenter {
  Point point;
  std::uint64_t category;
  std::uint64_t ordinal;
};

// Halton points over the bounding box grown by half its largest extent on
// every side, the cloud itself (seeded order), and midpoints of point pairs.
// Each family is a prefix of a fixed sequence, so larger plans see supersets.
std::vector<TaggedCenter> ball_centers(const PointCloud& cloud, const SamplingPlan& plan) {
  std::vector<TaggedCenter> out;
  const std::size_t dim = cloud.dim();
  const BoundingBox& box = cloud.bounds();
  double max_ext = 0.0;
  for (std::size_t i = 0; i < dim; ++i) max_ext = std::max(max_ext, box.hi[i] - box.lo[i]);
  if (max_ext == 0.0) max_ext = 1.0;
  const std::uint64_t bases[3] = {2, 3, 5};
  for (std::size_t k = 0; k < plan.ball_center_count; ++k) {
    Point c = Point::zero(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double lo = box.lo[i] - 0.5 * max_ext;
      const double hi = box.hi[i] + 0.5 * max_ext;
      c[i] = lo + (hi - lo) * radical_inverse(k + 1, bases[i]);
    }
    out.push_back({c, kHalton, k});
  }

  const std::size_t n = cloud.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng shuffle_rng(stream_id(plan.seed, {kCloudPoint, n}));
  std::shuffle(perm.begin(), perm.end(), shuffle_rng.engine());
  const std::size_t take = std::min(n, plan.ball_center_count);
  for (std::size_t k = 0; k < take; ++k) out.push_back({cloud[perm[k]], kCloudPoint, perm[k]});

  if (n >= 2) {
    const std::size_t pair_budget = 4 * plan.ball_center_count;
    const std::size_t all_pairs = n * (n - 1) / 2;
    if (all_pairs <= pair_budget) {
      std::uint64_t ord = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) out.push_back({(cloud[i] + cloud[j]) * 0.5, kMidpoint, ord++});
      }
    } else {
      Rng pair_rng(stream_id(plan.seed, {kMidpoint, n}));
      for (std::size_t k = 0; k < pair_budget; ++k) {
        const std::size_t i = pair_rng.below(n);
        std::size_t j = pair_rng.below(n - 1);
        if (j >= i) ++j;
        out.push_back({(cloud[i] + cloud[j]) * 0.5, kMidpoint, k});
      }
    }
  }
  return out;
}

struct BestPerRadius {
  double score = -kInf;
  bool present = false;
  Ball ball;
  HullPoint witness;
};

// Visits every sampled (ball, hull point) pair for each radius and keeps the
// highest score. `score(ball, candidate, members)` returns the quantity to
// maximize; single-member balls are scored on the member itself.
template <class Score>
std::vector<BestPerRadius> scan(const PointCloud& cloud, const SamplingPlan& plan, Score&& score) {
  const auto centers = ball_centers(cloud, plan);
  std::vector<BestPerRadius> best(plan.radius_grid.size());
  detail::HullSampler sampler(cloud);
  std::vector<std::size_t> members;
  for (std::size_t ri = 0; ri < plan.radius_grid.size(); ++ri) {
    const double r = plan.radius_grid[ri];
    auto& slot = best[ri];
    for (const TaggedCenter& tc : centers) {
      const Ball ball(tc.point, r);
      cloud.index().within(ball, members);
      if (members.empty()) continue;
      Rng rng(stream_id(plan.seed, {tc.category, tc.ordinal, tag_of(r)}));
      sampler.prepare(members);
      sampler.visit(plan.hull_sample_count, rng, [&](const detail::Candidate& cand) {
        const double s = score(ball, cand, members);
        if (!slot.present || s > slot.score) {
          slot.present = true;
          slot.score = s;
          slot.ball = ball;
          slot.witness = cand.to_hull_point();
        }
      });
    }
  }
  return best;
}

}  // namespace

void SamplingPlan::validate() const {
  if (ball_center_count == 0 || hull_sample_count == 0) {
    throw Error(ErrorKind::invalid_argument, "sampling plan counts must be at least 1");
  }
  for (std::size_t i = 0; i < radius_grid.size(); ++i) {
    if (!(radius_grid[i] > 0.0) || !std::isfinite(radius_grid[i])) {
      throw Error(ErrorKind::invalid_argument, "sampling plan radii must be positive");
    }
    if (i > 0 && !(radius_grid[i] > radius_grid[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "sampling plan radius grid must be strictly increasing");
    }
  }
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.back() = hi;
  return out;
}

SamplingPlan default_plan(const PointCloud& cloud, std::uint64_t seed) {
  SamplingPlan plan;
  double diam = cloud.diameter();
  if (diam == 0.0) diam = 1.0;
  plan.radius_grid = log_spaced(0.05 * diam, 1.5 * diam, 24);
  plan.seed = seed;
  return plan;
}

PrecisionEstimate relative_precision(const PointCloud& cloud, const Ball& ball, const SamplingPlan& plan) {
  plan.validate();
  require_same_dim(ball.center, cloud.dim(), "relative_precision");
  const auto members = members_in_ball(cloud, ball);
  if (members.empty()) {
    throw Error(ErrorKind::empty_intersection, "relative_precision: ball does not meet the set", ball.center);
  }
  detail::HullSampler sampler(cloud);
  sampler.prepare(members);
  Rng rng(stream_id(plan.seed, {kSingleBall, tag_of(ball.center[0]), tag_of(ball.center[1]),
                                tag_of(ball.center[2]), tag_of(ball.radius)}));
  PrecisionEstimate out;
  bool first = true;
  sampler.visit(4 * plan.hull_sample_count, rng, [&](const detail::Candidate& cand) {
    const double v = cloud.index().nearest(cand.q).distance / ball.radius;
    if (first || v > out.value) {
      first = false;
      out.value = v;
      out.witness = cand.to_hull_point();
    }
  });
  return out;
}

double NonconvexityProfile::max_alpha() const {
  double best = 0.0;
  for (const auto& e : entries) {
    if (e.present) best = std::max(best, e.alpha_hat);
  }
  return best;
}

NonconvexityProfile nonconvexity_function(const PointCloud& cloud, const SamplingPlan& plan) {
  plan.validate();
  auto best = scan(cloud, plan, [&](const Ball& ball, const detail::Candidate& cand, const auto&) {
    return cloud.index().nearest(cand.q).distance / ball.radius;
  });
  NonconvexityProfile profile;
  profile.set_label = cloud.label();
  for (std::size_t i = 0; i < best.size(); ++i) {
    ProfileEntry e;
    e.radius = plan.radius_grid[i];
    e.present = best[i].present;
    if (e.present) {
      e.alpha_hat = best[i].score;
      e.witness_ball = best[i].ball;
      e.witness_point = best[i].witness;
    }
    profile.entries.push_back(std::move(e));
  }
  return profile;
}

ParaconvexityVerdict check_paraconvexity(const PointCloud& cloud, double alpha, bool strong,
                                         const SamplingPlan& plan, double tau_verdict) {
  plan.validate();
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "check_paraconvexity: alpha must lie in [0, 1)");
  }
  auto best = scan(cloud, plan, [&](const Ball& ball, const detail::Candidate& cand, const auto& members) {
    const auto hit = cloud.index().nearest(cand.q);
    double d = hit.distance;
    if (strong && !ball.contains(cloud[hit.index])) {
      d = kInf;
      for (std::size_t idx : members) d = std::min(d, distance(cand.q, cloud[idx]));
    }
    return d - alpha * ball.radius;
  });
  ParaconvexityVerdict verdict;
  verdict.alpha_claimed = alpha;
  verdict.strong_variant = strong;
  verdict.worst_deficit = -kInf;
  for (const auto& b : best) {
    if (b.present && b.score > verdict.worst_deficit) {
      verdict.worst_deficit = b.score;
      verdict.witness_ball = b.ball;
      verdict.witness_point = b.witness;
    }
  }
  if (verdict.worst_deficit == -kInf) verdict.worst_deficit = 0.0;
  verdict.holds = verdict.worst_deficit <= tau_verdict;
  return verdict;
}

double phi(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_argument, "phi: argument outside [0, 1]");
  return std::sqrt(std::max(0.0, 2.0 * alpha - alpha * alpha));
}

ParaconvexityBounds phi_and_bounds(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "phi_and_bounds: alpha must lie in [0, 1)");
  }
  ParaconvexityBounds b;
  b.phi = phi(alpha);
  b.banach_bound = alpha / (1.0 - alpha);
  b.hilbert_bound = alpha * (1.0 + alpha * alpha) / (1.0 - alpha * alpha);
  return b;
}

double hilbert_constant_floor(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "hilbert_constant_floor: alpha must lie in [0, 1)");
  }
  return (1.0 + alpha * alpha) / (1.0 - alpha * alpha);
}

double gamma_fixed_point(double gamma) { return 2.0 * gamma * gamma / (1.0 + gamma * gamma); }

GammaSequence gamma_sequence(double gamma, std::size_t n_max) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "gamma_sequence: gamma must lie in (0, 1)");
  }
  GammaSequence seq;
  seq.fixed_point = gamma_fixed_point(gamma);
  const double t = seq.fixed_point;
  const double phi_t = phi(t);
  // Track the excess e_n = gamma_n - t. Expanding phi(t + e) - phi(t) keeps
  // the recursion free of cancellation, so the terms approach t from above
  // without rounding noise.
  double excess = gamma - t;
  for (std::size_t n = 0; n < n_max; ++n) {
    seq.terms.push_back(t + excess);
    const double g = t + excess;
    excess = gamma * excess * (2.0 - 2.0 * t - excess) / (phi(g) + phi_t);
  }
  if (!seq.terms.empty()) seq.terms.front() = gamma;
  return seq;
}

double threshold_root() {
  auto f = [](double a) { return a + a * a + a * a * a - 1.0; };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

InBallDistanceReport verify_in_ball_distance_bound(const PointCloud& cloud, const Ball& ball, double alpha,
                                                   const SamplingPlan& plan, double tau_geo) {
  plan.validate();
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "verify_in_ball_distance_bound: alpha must lie in [0, 1)");
  }
  const auto members = members_in_ball(cloud, ball);
  if (members.empty()) {
    throw Error(ErrorKind::empty_intersection, "verify_in_ball_distance_bound: ball does not meet the set",
                ball.center);
  }
  InBallDistanceReport report;
  report.bound = phi(alpha);
  detail::HullSampler sampler(cloud);
  sampler.prepare(members);
  Rng rng(stream_id(plan.seed, {kSingleBall + 1, tag_of(ball.center[0]), tag_of(ball.center[1]),
                                tag_of(ball.center[2]), tag_of(ball.radius), tag_of(alpha)}));
  const double r = ball.radius;
  sampler.visit(4 * plan.hull_sample_count, rng, [&](const detail::Candidate& cand) {
    ++report.sampled;
    const double d_all = cloud.index().nearest(cand.q).distance;
    if (d_all > alpha * r) return;
    ++report.hypothesis_count;
    double d_in = kInf;
    for (std::size_t idx : members) d_in = std::min(d_in, distance(cand.q, cloud[idx]));
    if (distance(cand.q, ball.center) <= (1.0 - alpha) * r) {
      ++report.near_center;
    } else {
      ++report.near_boundary;
    }
    const double ratio = d_in / r;
    if (ratio > report.worst_ratio || report.hypothesis_count == 1) {
      report.worst_ratio = ratio;
      report.worst_point = cand.q;
    }
    if (d_in > report.bound * r + tau_geo) ++report.violations;
  });
  report.vacuous = report.hypothesis_count == 0;
  return report;
}

InBallDistanceSearch search_in_ball_distance_counterexamples(std::size_t configurations, std::uint64_t seed,
                                                              double tolerance) {
  InBallDistanceSearch out;
  std::uint64_t attempt = 0;
  while (out.configurations < configurations) {
    Rng rng(stream_id(seed, {0x1a33, attempt++}));
    const Point c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const double r = rng.uniform(0.2, 1.5);
    const std::size_t n = 2 + rng.below(11);
    // Half the configurations crowd P against the sphere, where the
    // in-ball distance is hardest to control.
    const bool rim = rng.uniform() < 0.5;
    std::vector<Point> pts;
    for (std::size_t k = 0; k < n; ++k) {
      if (rim) {
        const double a = rng.uniform(0.0, 2.0 * M_PI);
        const double rho = r * rng.uniform(0.7, 1.3);
        pts.emplace_back(c.x() + rho * std::cos(a), c.y() + rho * std::sin(a));
      } else {
        pts.emplace_back(c.x() + rng.uniform(-2.0, 2.0) * r, c.y() + rng.uniform(-2.0, 2.0) * r);
      }
    }
    std::vector<std::size_t> in;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (squared_distance(pts[k], c) < r * r) in.push_back(k);
    }
    if (in.empty()) continue;
    // z: random convex combination of up to four members.
    const std::size_t m = std::min<std::size_t>(in.size(), 1 + rng.below(4));
    Point z = Point::zero(2);
    double total = 0.0;
    std::vector<double> w(m);
    std::vector<std::size_t> pick(m);
    for (std::size_t k = 0; k < m; ++k) {
      pick[k] = in[rng.below(in.size())];
      w[k] = rng.exponential();
      total += w[k];
    }
    for (std::size_t k = 0; k < m; ++k) z += pts[pick[k]] * (w[k] / total);

    double d_all = kInf;
    double d_in = kInf;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double d = distance(z, pts[k]);
      d_all = std::min(d_all, d);
      if (squared_distance(pts[k], c) < r * r) d_in = std::min(d_in, d);
    }
    const double alpha = d_all / r;
    if (alpha >= 1.0) continue;
    ++out.configurations;
    if (distance(z, c) <= (1.0 - alpha) * r) {
      ++out.near_center;
    } else {
      ++out.near_boundary;
    }
    const double excess = d_in / r - phi(alpha);
    out.worst_excess = std::max(out.worst_excess, excess);
    if (d_in > phi(alpha) * r + tolerance) ++out.violations;
  }
  return out;
}

}  // namespace paraconvex
