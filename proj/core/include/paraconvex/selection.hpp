#pragma once

// Continuous selections of x -> conv(P ∩ D) and the shrinking-ball loops that
// turn them into points of P: the Banach-space geometric loop and the
// two-phase Hilbert-space loop driven by the gamma recursion.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "paraconvex/euclid.hpp"

namespace paraconvex {

/// sum_p w_p p over p in P ∩ D with w_p proportional to (r - |p - c|)^kappa.
/// Throws `empty_intersection` (witness: the center) when the ball misses P.
HullPoint bary_select(const PointCloud& cloud, const Ball& ball, double kappa = 2.0);

/// Same rule on P ∩ D1 ∩ D2 with the product of both weight factors.
HullPoint bary_select(const PointCloud& cloud, const Ball& first, const Ball& second, double kappa = 2.0);

enum class IterationMode { banach, hilbert };

struct IterationSchedule {
  IterationMode mode = IterationMode::banach;
  double contraction = 0.5;  // beta (banach) or gamma (hilbert)
  double tol = 1e-8;         // relative to the initial radius
  std::size_t n_max = 0;     // 0: iteration_cap(contraction, tol)
  double slack = 0.0;        // gamma in rho(x) = r(x) + gamma, used by reprojection
  double kappa = 2.0;
  double hilbert_C = 0.0;    // hilbert mode: target constant, must exceed hilbert_constant_floor(gamma)
  double tau_inflate = 1e-6;

  void validate() const;
  std::size_t effective_n_max() const;
};

/// max(200, ceil(log(tol) / log(contraction)) + 10): enough steps for the
/// geometric radii to fall below tol.
std::size_t iteration_cap(double contraction, double tol);

IterationSchedule banach_schedule(double beta, double kappa = 2.0);
/// gamma must satisfy hilbert_constant_floor(gamma) < C.
IterationSchedule hilbert_schedule(double gamma, double C, double kappa = 2.0);
/// Midpoint of (alpha, g_max) where hilbert_constant_floor(g_max) = C.
double hilbert_gamma_for(double alpha, double C);

struct SelectionTrace {
  std::vector<Point> iterates;     // iterates[0] is the start
  std::vector<double> step_norms;  // |iterates[n+1] - iterates[n]|
  std::vector<double> radii;       // ball radius used for step n
  std::vector<double> bounds;      // certified dist(iterates[n+1], P) bound
  double initial_radius = 0.0;
  double certified_bound = 0.0;    // bound on |start - result|
  std::size_t inflated_steps = 0;  // steps that needed the (1 + tau_inflate) retry
  // The loop reached a scale where no sample lies in the next ball and
  // finished on the nearest point of P instead.
  bool resolution_limited = false;
  double resolution_snap = 0.0;
  // Hilbert mode only.
  std::size_t inner_steps = 0;  // N
  double lambda = 0.0;
};

struct IterationResult {
  Point point;
  std::size_t index = 0;  // index of `point` in the cloud
  SelectionTrace trace;
};

/// Runs the shrinking-ball loop from `start` until it lands on a point of P.
/// Banach mode: ball radii contraction^n * initial_radius around the current
/// iterate; |start - result| <= initial_radius / (1 - beta) whenever the
/// loop is not resolution limited. Hilbert mode: anchor D(start, initial_radius)
/// intersected with D(f_n, phi(gamma_n) * initial_radius), then the outer
/// lambda-geometric phase; |start - result| < C * initial_radius.
/// Throws `empty_intersection` if the first ball misses P and
/// `non_convergence` if n_max runs out.
IterationResult iterate_to_member(const PointCloud& cloud, const Point& start, double initial_radius,
                                  const IterationSchedule& schedule);

/// x -> F(x) sampled on a finite grid of parameters.
struct SetValuedMap {
  std::vector<Point> domain_points;
  std::function<PointCloud(const Point&)> value_at;
  std::string label;
};

struct ImprovedSelection {
  std::vector<Point> values;  // one per domain point
  double max_displacement = 0.0;
  double certified_bound = 0.0;  // eps / (1 - beta) or C * eps
};

/// Turns an eps-selection (dist(f_eps(x), F(x)) < eps on every grid point)
/// into a selection within certified_bound of it. Throws
/// `precondition_failed` with the offending grid point when f_eps is not an
/// eps-selection, or when the schedule does not dominate alpha.
ImprovedSelection improve_epsilon_selection(const SetValuedMap& map, std::span<const Point> f_eps, double eps,
                                            double alpha, const IterationSchedule& schedule);

}  // namespace paraconvex
