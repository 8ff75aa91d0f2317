#pragma once

// Measuring how far a finite set is from convex: sampled relative precision
// of ball approximations, the nonconvexity profile r -> alpha(r), weak and
// strong paraconvexity verdicts, the closed-form constants attached to
// paraconvexity, and the in-ball distance bound valid in Euclidean space.

#include <cstdint>
#include <string>
#include <vector>

#include "paraconvex/euclid.hpp"

namespace paraconvex {

/// How the sups in alpha(r) are sampled. Estimates are lower bounds of the
/// true sups and never decrease when any count grows (all random draws come
/// from streams keyed by seed and sample identity, not by budget).
struct SamplingPlan {
  std::size_t ball_center_count = 400;
  std::vector<double> radius_grid;
  std::size_t hull_sample_count = 128;
  std::uint64_t seed = 0;

  void validate() const;
};

/// `count` radii log-spaced from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// 24 log-spaced radii from 0.05 * diam to 1.5 * diam.
SamplingPlan default_plan(const PointCloud& cloud, std::uint64_t seed = 0);

struct PrecisionEstimate {
  double value = 0.0;
  HullPoint witness;  // support indices refer to the cloud
};

/// Sampled sup of dist(q, P) / r over q in conv(P ∩ D). Throws
/// `empty_intersection` when the ball misses P.
PrecisionEstimate relative_precision(const PointCloud& cloud, const Ball& ball, const SamplingPlan& plan);

struct ProfileEntry {
  double radius = 0.0;
  bool present = false;  // some sampled ball of this radius met P
  double alpha_hat = 0.0;
  Ball witness_ball;
  HullPoint witness_point;
};

struct NonconvexityProfile {
  std::string set_label;
  std::vector<ProfileEntry> entries;

  /// Max alpha_hat over present entries (0 for an empty profile).
  double max_alpha() const;
};

NonconvexityProfile nonconvexity_function(const PointCloud& cloud, const SamplingPlan& plan);

struct ParaconvexityVerdict {
  double alpha_claimed = 0.0;
  bool holds = true;
  bool strong_variant = false;
  double worst_deficit = 0.0;
  Ball witness_ball;
  HullPoint witness_point;
};

/// Weak form tests dist(q, P) <= alpha * r, strong form dist(q, P ∩ D) <= alpha * r,
/// over the sampled (ball, hull point) pairs. `holds` iff the worst deficit
/// is at most `tau_verdict`.
ParaconvexityVerdict check_paraconvexity(const PointCloud& cloud, double alpha, bool strong,
                                         const SamplingPlan& plan,
                                         double tau_verdict = kDefaultTolerances.verdict);

/// phi(a) = sqrt(2a - a^2) = sqrt(1 - (1 - a)^2), defined on [0, 1].
double phi(double alpha);

struct ParaconvexityBounds {
  double phi = 0.0;
  double banach_bound = 0.0;   // a / (1 - a)
  double hilbert_bound = 0.0;  // a (1 + a^2) / (1 - a^2)
};

/// Throws `invalid_argument` unless 0 <= alpha < 1.
ParaconvexityBounds phi_and_bounds(double alpha);

/// Lower bound on the improvement constant of the Hilbert-space repair:
/// (1 + a^2) / (1 - a^2).
double hilbert_constant_floor(double alpha);

struct GammaSequence {
  std::vector<double> terms;  // gamma_1 .. gamma_n
  double fixed_point = 0.0;   // 2 g^2 / (1 + g^2)
};

/// gamma_1 = g, gamma_{n+1} = g * phi(gamma_n). Throws unless 0 < g < 1.
GammaSequence gamma_sequence(double gamma, std::size_t n_max);
double gamma_fixed_point(double gamma);

/// Unique real root in (0, 1) of a + a^2 + a^3 = 1, by bisection to 1e-15.
double threshold_root();

/// Sampled check that every z in conv(P ∩ D) with dist(z, P) <= alpha * r
/// also satisfies dist(z, P ∩ D) <= phi(alpha) * r.
struct InBallDistanceReport {
  std::size_t sampled = 0;
  std::size_t hypothesis_count = 0;  // samples with dist(z, P) <= alpha r
  std::size_t violations = 0;
  std::size_t near_center = 0;       // |c - z| <= (1 - alpha) r
  std::size_t near_boundary = 0;
  double worst_ratio = 0.0;          // max dist(z, P ∩ D) / r over hypothesis samples
  double bound = 0.0;                // phi(alpha)
  bool vacuous = true;
  Point worst_point;
};

InBallDistanceReport verify_in_ball_distance_bound(const PointCloud& cloud, const Ball& ball, double alpha,
                                                   const SamplingPlan& plan,
                                                   double tau_geo = kDefaultTolerances.geo);

/// Randomized counterexample search over `configurations` random planar
/// (P, D, z) triples; alpha is taken tight, alpha = dist(z, P) / r.
struct InBallDistanceSearch {
  std::size_t configurations = 0;
  std::size_t violations = 0;
  std::size_t near_center = 0;
  std::size_t near_boundary = 0;
  double worst_excess = -1.0;  // max of dist(z, P ∩ D) / r - phi(alpha)
};

InBallDistanceSearch search_in_ball_distance_counterexamples(std::size_t configurations, std::uint64_t seed,
                                                              double tolerance = 1e-6);

}  // namespace paraconvex
