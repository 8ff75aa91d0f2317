#pragma once

// Retractions as points of a function space with the sup metric sampled on
// a probe grid: convex combinations, reprojection onto retractions,
// ensemble estimates of the nonconvexity of the set of retractions,
// continuously chosen families and sigma-convex combinations.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paraconvex/euclid.hpp"
#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/retraction.hpp"

namespace paraconvex {

struct ProbeGrid {
  std::vector<Point> probes;
  double density = 0.0;  // lattice points per axis
};

/// per_axis^d lattice over `box` (cell centers) followed by every point of
/// every cloud in `include`, in order.
ProbeGrid make_probe_grid(const BoundingBox& box, std::size_t per_axis, std::span<const PointCloud> include);
ProbeGrid make_probe_grid(const RetractionOperator& r, std::size_t per_axis = 40);

struct FunctionValue {
  Point value;
  /// Chebyshev radius of the values a combination was built from; NaN when
  /// the function is not a combination.
  double spread = std::numeric_limits<double>::quiet_NaN();
};

class FunctionOnBox {
 public:
  using Evaluator = std::function<FunctionValue(const Point&)>;

  FunctionOnBox(Evaluator evaluator, std::string label) : eval_(std::move(evaluator)), label_(std::move(label)) {}

  static FunctionOnBox from_retraction(const RetractionOperator& r);
  static FunctionOnBox constant(const Point& c, std::string label = "constant");

  FunctionValue evaluate(const Point& x) const { return eval_(x); }
  Point operator()(const Point& x) const { return eval_(x).value; }
  const std::string& label() const noexcept { return label_; }

 private:
  Evaluator eval_;
  std::string label_;
};

/// max over probes of |f(x) - g(x)|.
double sup_distance(const FunctionOnBox& f, const FunctionOnBox& g, const ProbeGrid& probes);

/// Q(x) = sum w_i R_i(x), spread = Chebyshev radius of {R_i(x) : w_i > 0}.
/// Throws `invalid_argument` on mismatched targets or weights off the simplex.
FunctionOnBox combine_retractions(const std::vector<RetractionOperator>& rs, std::span<const double> weights);

struct ReprojectionResult {
  std::optional<RetractionOperator> retraction;
  double max_rho = 0.0;        // max over probes of spread + gamma_slack
  double max_spread = 0.0;     // max over probes of the Chebyshev radius
  double bound = 0.0;          // beta / (1 - beta) * max_rho + tol
  double sup_distance = 0.0;   // sup over probes of |Q(x) - R(x)|
  std::size_t resolution_limited = 0;
};

/// Identity on P; elsewhere the Banach loop on P from Q(x) with initial
/// radius beta * rho(x), rho(x) = spread(x) + gamma_slack. Checks
/// dist(Q(x), P) < beta * rho(x) on every probe first and throws
/// `precondition_failed` with the probe as witness when it fails.
ReprojectionResult reproject_to_retraction(const FunctionOnBox& q, const PointCloud& cloud, double beta,
                                           double gamma_slack, const ProbeGrid& probes, double kappa = 2.0,
                                           double tol = 1e-8);

struct EnsembleOptions {
  std::vector<double> beta_offsets{0.05, 0.15, 0.25};
  std::vector<double> kappas{1.0, 2.0, 4.0};
  /// Defaults to 1e-9 * diam(P).
  std::optional<double> gamma_slack;
  std::size_t combinations = 8;  // sampled (subset, weights) draws
  double reproject_beta_offset = 0.05;
};

struct SpaceSample {
  std::vector<std::size_t> members;
  std::vector<double> weights;
  double radius = 0.0;  // function-space ball radius r
  double max_rho = 0.0;  // max over probes of spread + gamma_slack
  double sup_distance = 0.0;
  double bound = 0.0;   // ReprojectionResult::bound
  double ratio = 0.0;
};

struct SpaceEstimate {
  double ratio = 0.0;  // max sup_distance(Q, R) / r
  bool degenerate = false;
  std::size_t ensemble_size = 0;
  double gamma_slack = 0.0;
  double beta = 0.0;  // reprojection contraction
  std::vector<SpaceSample> samples;
};

/// Ensemble of retractions over the (beta, kappa) grid (betas >= 1 dropped;
/// the first `ensemble` pairs in beta-major order), random sub-ensembles of
/// size >= 2 with weights drawn from the simplex, each inside the sup-metric
/// ball centered at the pointwise Chebyshev center. Returns the largest
/// observed sup_distance(Q, R) / r.
SpaceEstimate estimate_space_paraconvexity(const PointCloud& cloud, double alpha_hat, std::size_t ensemble,
                                           const ProbeGrid& probes, std::uint64_t seed,
                                           const EnsembleOptions& options = {});

struct FamilyOfSets {
  std::vector<double> params;
  std::vector<PointCloud> sets;
  std::vector<double> hausdorff_steps;

  /// Fills hausdorff_steps from the sets.
  static FamilyOfSets from_sets(std::vector<double> params, std::vector<PointCloud> sets);
  void validate(double tau_geo = kDefaultTolerances.geo) const;
};

struct FamilyOptions {
  double margin = 0.05;
  double box_inflation = 3.0;
  double kappa = 2.0;
  /// Used for every member; measured on sets[0] when absent.
  std::optional<double> alpha_hat;
  /// Plan for the per-member check at beta - margin; default_plan when absent.
  std::optional<SamplingPlan> plan;
  bool check_members = true;
};

struct RetractionFamily {
  std::vector<RetractionOperator> operators;
  std::vector<double> repair_radii;  // ball radius used to repair R_{t-1} into R_t
  double alpha_hat = 0.0;
  std::vector<std::string> warnings;
};

/// R_0 built directly; R_t repairs R_{t-1}: identity on P_t, elsewhere the
/// Banach loop on P_t from R_{t-1}(x) with radius hausdorff step * (1 + 1e-6).
RetractionFamily build_retraction_family(const FamilyOfSets& family, double beta, const FamilyOptions& options = {});

/// Values of every operator of a repaired chain at x, reusing R_{t-1}(x).
std::vector<Point> evaluate_family(const std::vector<RetractionOperator>& operators, const Point& x);

struct ModulusRow {
  std::size_t index = 0;  // pair (index, index + 1)
  double delta = 0.0;     // Hausdorff step
  double sup_dist = 0.0;
  double ratio = 0.0;     // sup_dist * (1 - alpha_hat) / delta
  bool flagged = false;   // ratio > 1 + slack
};

std::vector<ModulusRow> continuity_modulus(const FamilyOfSets& family, const std::vector<RetractionOperator>& operators,
                                           const ProbeGrid& probes, double alpha_hat, double slack = 0.1);

/// R(sum w_i y_i). Throws `precondition_failed` when some y is farther than
/// `tol` from P and `invalid_argument` for weights off the simplex.
Point sigma_convex_combination(const RetractionOperator& r, std::span<const Point> ys, std::span<const double> weights,
                               double tol = 1e-9);

/// True when no two values of distinct parameters share a point (within tau_dup).
bool pairwise_disjoint(std::span<const PointCloud> values, double tau_dup = kDefaultTolerances.dup);

}  // namespace paraconvex
