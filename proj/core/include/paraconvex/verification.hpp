#pragma once

// The acceptance suite: every criterion as a function of a RunConfig, with
// CSV and SVG artifacts written to the output directory and a JSON summary.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "paraconvex/euclid.hpp"

namespace paraconvex {

struct RunConfig {
  std::uint64_t seed = 20240611;
  Tolerances tolerances{};
  double tol = 1e-8;              // relative stopping tolerance of the loops
  double beta_margin = 0.05;      // beta = alpha_hat + beta_margin
  double family_margin = 0.05;    // members are checked at beta - family_margin
  std::size_t ball_center_count = 400;  // sampling plan for the curve scenes
  std::size_t hull_sample_count = 128;
  std::size_t polygon_density = 1000;
  std::size_t polygon_ball_centers = 100;
  std::size_t polygon_hull_samples = 64;
  std::size_t probe_density = 40;  // lattice points per axis
  std::size_t query_count = 1000;
  std::size_t in_ball_configurations = 10000;
  std::size_t sigma_draws = 1000;
  std::size_t family_steps = 50;
  std::size_t ensemble = 9;
  std::size_t space_combinations = 16;
  /// Forces this beta for the retraction criterion instead of alpha_hat + margin.
  std::optional<double> forced_beta;
  /// Criteria to run (1..10); empty runs all.
  std::vector<int> only;
  /// Criterion 10 reruns criteria 1-9 into a scratch directory and compares CSV bytes.
  bool determinism_rerun = true;
  std::filesystem::path output_dir = "paraconvex-out";

  /// Throws `invalid_argument` for nonpositive tolerances or counts.
  void validate() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  std::string error;  // ErrorKind name when the criterion stopped on an exception
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  std::vector<std::filesystem::path> files;  // relative to the output directory, sorted

  bool all_passed() const;
  std::string summary_json() const;
};

/// Runs the selected criteria, writes their artifacts and summary.json into
/// config.output_dir (created when missing). Failures are reported, never thrown,
/// except `io` for an unwritable output directory.
VerificationReport run_verification_suite(const RunConfig& config);

/// Default resolution of the output directory: $PARACONVEX_OUT when set, else "paraconvex-out".
std::filesystem::path default_output_dir();

}  // namespace paraconvex
