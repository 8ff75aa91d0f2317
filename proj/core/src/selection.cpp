#include "paraconvex/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paraconvex/parallel.hpp"
#include "paraconvex/paraconvexity.hpp"

namespace paraconvex {

namespace {

inline double weight_factor(double slack, double kappa) {
  if (kappa == 2.0) return slack * slack;
  if (kappa == 1.0) return slack;
  return std::pow(slack, kappa);
}

// Weighted combination over the given members; `weight(i)` must be positive.
template <class Weight>
HullPoint combine(const PointCloud& cloud, const std::vector<std::size_t>& members, Weight&& weight) {
  HullPoint out;
  out.support.reserve(members.size());
  double total = 0.0;
  for (std::size_t idx : members) {
    const double w = weight(idx);
    out.support.emplace_back(idx, w);
    total += w;
  }
  out.point = Point::zero(cloud.dim());
  if (!(total > 0.0)) {
    // Every weight underflowed; fall back to equal weights.
    for (auto& s : out.support) s.second = 1.0 / static_cast<double>(members.size());
  } else {
    for (auto& s : out.support) s.second /= total;
  }
  for (const auto& [idx, w] : out.support) out.point += cloud[idx] * w;
  return out;
}

thread_local std::vector<std::size_t> tl_members;

struct Snap {
  Point point;
  std::size_t index;
  double distance;
};

Snap snap_to_cloud(const PointCloud& cloud, const Point& x) {
  const auto hit = cloud.index().nearest(x);
  return {cloud[hit.index], hit.index, hit.distance};
}

void finish(IterationResult& res, const PointCloud& cloud, const Point& h, bool fallback) {
  const Snap s = snap_to_cloud(cloud, h);
  res.point = s.point;
  res.index = s.index;
  if (fallback) {
    res.trace.resolution_limited = true;
    res.trace.resolution_snap = s.distance;
  } else if (s.distance > 0.0) {
    // Covered by the tail of the geometric series, so it is an ordinary step.
    res.trace.iterates.push_back(s.point);
    res.trace.step_norms.push_back(s.distance);
    res.trace.radii.push_back(res.trace.bounds.empty() ? res.trace.initial_radius : res.trace.bounds.back());
    res.trace.bounds.push_back(0.0);
  }
}

IterationResult banach_loop(const PointCloud& cloud, const Point& start, double init, const IterationSchedule& sch) {
  IterationResult res;
  auto& tr = res.trace;
  tr.initial_radius = init;
  tr.certified_bound = init / (1.0 - sch.contraction) * (1.0 + sch.tau_inflate);
  tr.iterates.push_back(start);
  const double tol_abs = sch.tol * init;
  const std::size_t n_max = sch.effective_n_max();
  Point h = start;
  double r = init;
  for (std::size_t n = 0; n < n_max; ++n) {
    double used = r;
    cloud.index().within(Ball(h, used), tl_members);
    if (tl_members.empty()) {
      used = r * (1.0 + sch.tau_inflate);
      cloud.index().within(Ball(h, used), tl_members);
      if (!tl_members.empty()) ++tr.inflated_steps;
    }
    if (tl_members.empty()) {
      if (n == 0) throw Error(ErrorKind::empty_intersection, "iterate_to_member: initial ball misses the set", h);
      finish(res, cloud, h, true);
      return res;
    }
    const Ball ball(h, used);
    const HullPoint next = combine(cloud, tl_members, [&](std::size_t idx) {
      return weight_factor(used - distance(cloud[idx], h), sch.kappa);
    });
    const double step = distance(next.point, h);
    tr.iterates.push_back(next.point);
    tr.step_norms.push_back(step);
    tr.radii.push_back(used);
    tr.bounds.push_back(sch.contraction * used);
    h = next.point;
    if (step <= tol_abs && cloud.index().nearest(h).distance <= tol_abs) {
      finish(res, cloud, h, false);
      return res;
    }
    r *= sch.contraction;
  }
  throw Error(ErrorKind::non_convergence, "iterate_to_member: iteration budget exhausted", h);
}

IterationResult hilbert_loop(const PointCloud& cloud, const Point& start, double init, const IterationSchedule& sch) {
  const double gamma = sch.contraction;
  const double C = sch.hilbert_C;
  const double ceiling = 1.0 - 1.0 / C;
  const GammaSequence seq = gamma_sequence(gamma, 10000);
  std::size_t N = 0;
  while (N < seq.terms.size() && !(seq.terms[N] < ceiling)) ++N;
  if (N == seq.terms.size()) {
    throw Error(ErrorKind::precondition_failed, "iterate_to_member: gamma recursion never drops below 1 - 1/C");
  }
  const std::size_t inner = N + 1;  // gamma_N with 1-based N
  const double lambda = 0.5 * (seq.terms[N] + ceiling);

  IterationResult res;
  auto& tr = res.trace;
  tr.initial_radius = init;
  tr.inner_steps = inner;
  tr.lambda = lambda;
  tr.certified_bound = init / (1.0 - lambda) * (1.0 + sch.tau_inflate);
  tr.iterates.push_back(start);
  const double tol_abs = sch.tol * init;
  const std::size_t n_max = sch.effective_n_max();
  std::size_t steps = 0;

  Point g = start;
  double eps = init;
  while (eps > tol_abs) {
    const Ball anchor(g, eps);
    Point f = g;
    bool moved = false;
    for (std::size_t n = 0; n < inner; ++n) {
      if (++steps > n_max) throw Error(ErrorKind::non_convergence, "iterate_to_member: iteration budget exhausted", f);
      HullPoint next;
      double radius = eps;
      if (n == 0) {
        cloud.index().within(anchor, tl_members);
        if (tl_members.empty()) {
          if (steps == 1) {
            throw Error(ErrorKind::empty_intersection, "iterate_to_member: initial ball misses the set", g);
          }
          finish(res, cloud, f, true);
          return res;
        }
        next = combine(cloud, tl_members, [&](std::size_t idx) {
          return weight_factor(eps - distance(cloud[idx], g), sch.kappa);
        });
      } else {
        radius = phi(seq.terms[n - 1]) * eps;
        bool ok = false;
        for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
          const double rr = attempt == 0 ? radius : radius * (1.0 + sch.tau_inflate);
          try {
            next = bary_select(cloud, anchor, Ball(f, rr), sch.kappa);
            ok = true;
            if (attempt == 1) ++tr.inflated_steps;
            radius = rr;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::empty_intersection) throw;
          }
        }
        if (!ok) {
          finish(res, cloud, f, true);
          return res;
        }
      }
      const double step = distance(next.point, f);
      moved = moved || step > 0.0;
      tr.iterates.push_back(next.point);
      tr.step_norms.push_back(step);
      tr.radii.push_back(radius);
      tr.bounds.push_back(seq.terms[n] * eps);
      f = next.point;
    }
    g = f;
    if (!moved && cloud.index().nearest(g).distance == 0.0) break;
    eps *= lambda;
  }
  finish(res, cloud, g, false);
  return res;
}

}  // namespace

HullPoint bary_select(const PointCloud& cloud, const Ball& ball, double kappa) {
  require_same_dim(ball.center, cloud.dim(), "bary_select");
  if (!(kappa > 0.0)) throw Error(ErrorKind::invalid_argument, "bary_select: kappa must be positive");
  std::vector<std::size_t> members;
  cloud.index().within(ball, members);
  if (members.empty()) {
    throw Error(ErrorKind::empty_intersection, "bary_select: ball does not meet the set", ball.center);
  }
  return combine(cloud, members, [&](std::size_t idx) {
    return weight_factor(ball.radius - distance(cloud[idx], ball.center), kappa);
  });
}

HullPoint bary_select(const PointCloud& cloud, const Ball& first, const Ball& second, double kappa) {
  require_same_dim(first.center, cloud.dim(), "bary_select");
  require_same_dim(second.center, cloud.dim(), "bary_select");
  if (!(kappa > 0.0)) throw Error(ErrorKind::invalid_argument, "bary_select: kappa must be positive");
  const Ball& small = first.radius <= second.radius ? first : second;
  const Ball& other = first.radius <= second.radius ? second : first;
  std::vector<std::size_t> members;
  cloud.index().within(small, members);
  std::erase_if(members, [&](std::size_t idx) { return !other.contains(cloud[idx]); });
  if (members.empty()) {
    throw Error(ErrorKind::empty_intersection, "bary_select: balls do not meet the set together", first.center);
  }
  return combine(cloud, members, [&](std::size_t idx) {
    return weight_factor(first.radius - distance(cloud[idx], first.center), kappa) *
           weight_factor(second.radius - distance(cloud[idx], second.center), kappa);
  });
}

std::size_t iteration_cap(double contraction, double tol) {
  const double needed = std::ceil(std::log(tol) / std::log(contraction));
  return std::max<std::size_t>(200, static_cast<std::size_t>(needed) + 10);
}

void IterationSchedule::validate() const {
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "schedule: contraction must lie in (0, 1)");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "schedule: tol must be positive");
  if (!(kappa > 0.0)) throw Error(ErrorKind::invalid_argument, "schedule: kappa must be positive");
  if (!(slack >= 0.0) || !(tau_inflate >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "schedule: slack and tau_inflate must be nonnegative");
  }
  if (mode == IterationMode::hilbert && !(hilbert_C > hilbert_constant_floor(contraction))) {
    throw Error(ErrorKind::invalid_argument, "schedule: C must exceed (1 + g^2) / (1 - g^2) for the chosen gamma");
  }
}

std::size_t IterationSchedule::effective_n_max() const {
  if (n_max > 0) return n_max;
  const std::size_t cap = iteration_cap(contraction, tol);
  return mode == IterationMode::banach ? cap : 64 * cap;
}

IterationSchedule banach_schedule(double beta, double kappa) {
  IterationSchedule s;
  s.mode = IterationMode::banach;
  s.contraction = beta;
  s.kappa = kappa;
  return s;
}

IterationSchedule hilbert_schedule(double gamma, double C, double kappa) {
  IterationSchedule s;
  s.mode = IterationMode::hilbert;
  s.contraction = gamma;
  s.hilbert_C = C;
  s.kappa = kappa;
  return s;
}

double hilbert_gamma_for(double alpha, double C) {
  if (!(C > 1.0)) throw Error(ErrorKind::invalid_argument, "hilbert_gamma_for: C must exceed 1");
  const double g_max = std::sqrt((C - 1.0) / (C + 1.0));
  if (!(alpha < g_max)) {
    throw Error(ErrorKind::precondition_failed, "hilbert_gamma_for: C does not exceed (1 + a^2) / (1 - a^2)");
  }
  return 0.5 * (alpha + g_max);
}

IterationResult iterate_to_member(const PointCloud& cloud, const Point& start, double initial_radius,
                                  const IterationSchedule& schedule) {
  schedule.validate();
  require_same_dim(start, cloud.dim(), "iterate_to_member");
  if (!(initial_radius > 0.0) || !std::isfinite(initial_radius)) {
    throw Error(ErrorKind::invalid_argument, "iterate_to_member: initial radius must be positive");
  }
  const auto hit = cloud.index().nearest(start);
  if (hit.distance <= kDefaultTolerances.dup) {
    IterationResult res;
    res.point = cloud[hit.index];
    res.index = hit.index;
    res.trace.iterates.push_back(start);
    res.trace.initial_radius = initial_radius;
    return res;
  }
  return schedule.mode == IterationMode::banach ? banach_loop(cloud, start, initial_radius, schedule)
                                                : hilbert_loop(cloud, start, initial_radius, schedule);
}

ImprovedSelection improve_epsilon_selection(const SetValuedMap& map, std::span<const Point> f_eps, double eps,
                                            double alpha, const IterationSchedule& schedule) {
  schedule.validate();
  if (f_eps.size() != map.domain_points.size()) {
    throw Error(ErrorKind::invalid_argument, "improve_epsilon_selection: one value per domain point required");
  }
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "improve_epsilon_selection: eps must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "improve_epsilon_selection: alpha must lie in [0, 1)");
  }
  if (schedule.mode == IterationMode::banach && !(schedule.contraction > alpha)) {
    throw Error(ErrorKind::precondition_failed, "improve_epsilon_selection: beta must exceed alpha");
  }
  if (schedule.mode == IterationMode::hilbert &&
      !(schedule.contraction > alpha && schedule.hilbert_C > hilbert_constant_floor(alpha))) {
    throw Error(ErrorKind::precondition_failed,
                "improve_epsilon_selection: need gamma > alpha and C > (1 + a^2) / (1 - a^2)");
  }
  const std::size_t n = f_eps.size();
  ImprovedSelection out;
  out.values.resize(n);
  std::vector<double> displacement(n, 0.0);
  std::vector<double> certified(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const PointCloud value = map.value_at(map.domain_points[i]);
    if (!(dist_to_cloud(f_eps[i], value) < eps)) {
      throw Error(ErrorKind::precondition_failed, "improve_epsilon_selection: f_eps is not an eps-selection",
                  map.domain_points[i]);
    }
    const IterationResult r = iterate_to_member(value, f_eps[i], eps, schedule);
    out.values[i] = r.point;
    displacement[i] = distance(r.point, f_eps[i]);
    certified[i] = r.trace.certified_bound;
  });
  for (std::size_t i = 0; i < n; ++i) {
    out.max_displacement = std::max(out.max_displacement, displacement[i]);
    out.certified_bound = std::max(out.certified_bound, certified[i]);
  }
  if (n > 0 && out.certified_bound == 0.0) {
    out.certified_bound = schedule.mode == IterationMode::banach ? eps / (1.0 - schedule.contraction)
                                                                 : schedule.hilbert_C * eps;
  }
  return out;
}

}  // namespace paraconvex
