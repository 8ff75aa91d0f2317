#pragma once

// Retractions of a working box onto a paraconvex point cloud, built by the
// shrinking-ball iteration, and their quantitative diagnostics.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paraconvex/euclid.hpp"
#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/selection.hpp"

namespace paraconvex {

/// Deterministic map R: box -> P with R(p) = p on P. Cheap to copy; copies
/// share the evaluation rule. Safe to evaluate from many threads.
class RetractionOperator {
 public:
  /// Evaluation rule off P. `x` is inside the box and not a point of P.
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual IterationResult evaluate(const RetractionOperator& self, const Point& x) const = 0;
    virtual std::string_view kind() const = 0;
  };

  RetractionOperator(PointCloud target, IterationSchedule schedule, BoundingBox working_box, double measured_alpha,
                     std::shared_ptr<const Impl> impl, std::string label = {});

  const PointCloud& target() const noexcept { return target_; }
  const IterationSchedule& schedule() const noexcept { return schedule_; }
  const BoundingBox& working_box() const noexcept { return box_; }
  double beta() const noexcept { return schedule_.contraction; }
  /// 2 / (1 - beta): |x - R(x)| <= C d(x).
  double certified_C() const noexcept { return 2.0 / (1.0 - schedule_.contraction); }
  double measured_alpha() const noexcept { return alpha_; }
  const std::string& label() const noexcept { return label_; }
  std::string_view kind() const { return impl_->kind(); }
  const Impl& impl() const noexcept { return *impl_; }

  bool in_box(const Point& x) const noexcept;

  /// Throws `invalid_argument` outside the working box.
  IterationResult evaluate(const Point& x) const;
  Point operator()(const Point& x) const { return evaluate(x).point; }

 private:
  PointCloud target_;
  IterationSchedule schedule_;
  BoundingBox box_;
  double alpha_;
  std::shared_ptr<const Impl> impl_;
  std::string label_;
};

struct RetractionOptions {
  double box_inflation = 3.0;
  double kappa = 2.0;
  double tol = 1e-8;
  /// Skip the measurement and trust this value of alpha_hat.
  std::optional<double> alpha_hat;
  /// Plan for measuring alpha_hat; default_plan(P) when absent.
  std::optional<SamplingPlan> plan;
  /// Overrides the inflated bounding box (families share one box).
  std::optional<BoundingBox> working_box;
};

/// Identity on P; elsewhere the Banach loop from x with initial radius 2 d(x).
/// A singleton P gives the constant map. Throws `precondition_failed` when
/// beta <= alpha_hat (witness: the hull point realizing alpha_hat) and
/// `invalid_argument` unless 0 < beta < 1 and box_inflation >= 2.
RetractionOperator build_retraction(const PointCloud& cloud, double beta, const RetractionOptions& options = {});
RetractionOperator build_retraction(const PointCloud& cloud, double beta, double box_inflation);

/// R(x); throws outside the working box.
inline Point eval_retraction(const RetractionOperator& r, const Point& x) { return r(x); }

struct UniformityRow {
  double eps = 0.0;
  double delta = 0.0;  // largest tested delta with d(x) < delta => |x - R(x)| < eps
};

struct UniformityReport {
  std::vector<UniformityRow> rows;
  double lipschitz_at_P_ratio = 0.0;  // max |R(x0) - R(x)| / |x0 - x| over x0 in P
  double lipschitz_bound = 0.0;       // 1 + C
  bool lipschitz_ok = true;
  double displacement_ratio = 0.0;    // max |x - R(x)| / d(x)
  double max_membership_error = 0.0;  // max dist(R(x), P)
  std::size_t idempotence_failures = 0;
  std::size_t resolution_limited = 0;
  std::size_t sample_count = 0;
};

/// Fractions {0.5, 0.2, 0.1, 0.05, 0.02, 0.01} of the target diameter.
std::vector<double> default_eps_grid(const RetractionOperator& r);

/// Samples half the queries near P (log-uniform distance) and half uniformly
/// in the box. Each lipschitz pair uses the nearest point of P and three
/// random points of P as x0. `slack` is the relative allowance on 1 + C.
UniformityReport retraction_diagnostics(const RetractionOperator& r, const std::vector<double>& eps_grid,
                                        std::size_t sample_count, std::uint64_t seed, double slack = 1e-9);

/// Seeded query points for r: the sample set used by retraction_diagnostics.
std::vector<Point> diagnostic_queries(const RetractionOperator& r, std::size_t count, std::uint64_t seed);

}  // namespace paraconvex
