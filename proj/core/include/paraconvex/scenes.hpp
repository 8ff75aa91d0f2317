#pragma once

// Test scenes: deterministic point-cloud generators, rigid transforms,
// parameter sweeps into families, JSON scene files and the brute-force
// grid oracle for alpha(r) in the plane.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paraconvex/euclid.hpp"
#include "paraconvex/retraction_space.hpp"

namespace paraconvex {

enum class Generator {
  segment,
  convex_polygon,
  disk_sample,
  circle_arc,
  semicircle,
  sin_reciprocal,
  spiral,
  two_points,
  custom_points,
};

std::string_view to_string(Generator g) noexcept;
/// Throws `invalid_argument` for an unknown name.
Generator generator_from_string(std::string_view name);

/// p -> scale * Rot(angle) p + translation (rotation about the z axis in 3D).
struct RigidMotion {
  double angle = 0.0;
  double scale = 1.0;
  double tx = 0.0;
  double ty = 0.0;
  double tz = 0.0;

  Point apply(const Point& p) const;
};

/// Sweeps one transform field ("angle", "scale", "tx", "ty" or "tz") from
/// `from` to `to` in `steps` equal steps (steps + 1 members).
struct FamilySweep {
  std::string parameter = "angle";
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 1;
};

/// Generator parameters (all optional, defaults in brackets):
///   segment         x0 y0 x1 y1 [-1 0 1 0]; density points incl. endpoints
///   convex_polygon  sides [4] radius [1] phase [pi/4]; density points on the
///                   boundary, interior filled by a square lattice of the same spacing
///   disk_sample     radius [1]; density points on the circle, lattice inside
///   circle_arc      angle [pi] radius [1] start [0]; density points, equal arc spacing
///   semicircle      circle_arc with angle pi
///   sin_reciprocal  x_min [0.05] x_max [1]; density points of (x, sin(1/x)) at equal arc length
///   spiral          turns [2] r0 [0.2] r1 [1]; density points, equal arc length
///   two_points      {(-1, 0), (1, 0)}; density ignored
///   custom_points   `points`, used as given
struct Scene {
  std::string name;
  Generator generator = Generator::semicircle;
  std::map<std::string, double> params;
  std::vector<Point> points;  // custom_points only
  std::size_t density = 100;
  std::optional<RigidMotion> transform;
  std::optional<FamilySweep> family_sweep;

  double param(const std::string& key, double fallback) const;
};

/// Throws `invalid_argument` for parameters outside their ranges.
PointCloud generate_scene(const Scene& scene);
/// Applies the sweep on top of the scene transform. Throws when the scene has no sweep.
FamilyOfSets generate_family(const Scene& scene);

/// {name, generator, params, density, transform, family_sweep, points}.
Scene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const Scene& scene);
/// Throws `io` when the file cannot be read.
Scene load_scene(const std::filesystem::path& path);

/// A named built-in scene ("semicircle", "two_points", "convex_polygon",
/// "sin_reciprocal", "segment", "disk", "arc", "spiral") or a path to a scene file.
Scene resolve_scene(const std::string& name_or_path);

/// Exhaustive grid oracle for alpha(r) in the plane: ball centers on a
/// lattice of step `grid_step` over the bounding box grown by r, and for
/// each ball the lattice points inside conv(P ∩ D) plus every hull edge cut
/// into an even number of pieces no longer than grid_step. Throws
/// `dimension_mismatch` outside 2D and `invalid_argument` unless
/// 0 < grid_step <= r / 20.
double brute_force_alpha_oracle(const PointCloud& cloud, double r, double grid_step);

}  // namespace paraconvex
