#pragma once

// CSV tables and SVG figures written by the experiments. Numbers are printed
// in the shortest form that reads back to the same double, so every table
// round-trips exactly.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "paraconvex/euclid.hpp"
#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/retraction_space.hpp"

namespace paraconvex {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws `invalid_argument` when missing.
  std::size_t column(std::string_view name) const;
};

std::string format_number(double v);
/// Accepts everything format_number emits, including "nan", "inf" and "-inf".
double parse_number(std::string_view text);

/// RFC 4180 quoting, '\n' line ends, trailing newline.
std::string to_csv(const CsvTable& table);
/// Throws `invalid_argument` on ragged rows or a malformed quoted field.
CsvTable parse_csv(std::string_view text);

/// Writes through a temporary file and renames it into place. Creates
/// missing parent directories. Throws `io`.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

// Documented schemas. Each has a to_table and a from_table with
// from_table(to_table(x)) == x.

/// scene, r, alpha_hat, witness_cx, witness_cy, witness_qx, witness_qy
struct ProfileRow {
  std::string scene;
  double r = 0.0;
  double alpha_hat = 0.0;
  double witness_cx = 0.0;
  double witness_cy = 0.0;
  double witness_qx = 0.0;
  double witness_qy = 0.0;

  bool operator==(const ProfileRow&) const = default;
};
std::vector<ProfileRow> profile_rows(const std::string& scene, const NonconvexityProfile& profile);
CsvTable to_table(const std::vector<ProfileRow>& rows);
std::vector<ProfileRow> profile_rows_from_table(const CsvTable& table);

/// alpha, phi, banach, hilbert, threshold
struct ConstantsRow {
  double alpha = 0.0;
  double phi = 0.0;
  double banach = 0.0;
  double hilbert = 0.0;
  double threshold = 0.0;

  bool operator==(const ConstantsRow&) const = default;
};
std::vector<ConstantsRow> constants_rows(const std::vector<double>& alphas);
CsvTable to_table(const std::vector<ConstantsRow>& rows);
std::vector<ConstantsRow> constants_rows_from_table(const CsvTable& table);

/// x, y, rx, ry, d, displacement (planar retraction field)
struct FieldRow {
  double x = 0.0;
  double y = 0.0;
  double rx = 0.0;
  double ry = 0.0;
  double d = 0.0;
  double displacement = 0.0;

  bool operator==(const FieldRow&) const = default;
};
CsvTable to_table(const std::vector<FieldRow>& rows);
std::vector<FieldRow> field_rows_from_table(const CsvTable& table);

/// index, delta, sup_dist, ratio, flagged
CsvTable to_table(const std::vector<ModulusRow>& rows);
std::vector<ModulusRow> modulus_rows_from_table(const CsvTable& table);

/// sample, members, weights, radius, max_rho, sup_distance, bound, ratio
/// (members and weights joined with ';')
CsvTable to_table(const std::vector<SpaceSample>& rows);
std::vector<SpaceSample> space_rows_from_table(const CsvTable& table);

/// Cloud as dots and one arrow per field row from (x, y) to (rx, ry).
std::string field_svg(const PointCloud& cloud, const std::vector<FieldRow>& field, const std::string& title);
/// Polyline of (x, y) pairs with a dashed horizontal reference line at `reference` (skipped when NaN).
std::string line_plot_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title,
                          const std::string& x_label, const std::string& y_label, double reference);

}  // namespace paraconvex
