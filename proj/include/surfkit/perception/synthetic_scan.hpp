#pragma once

#include "surfkit/geometry/types.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace surfkit::perception {

enum class SurfaceKind { Plane, CylinderPatch };

/// Gaussian bump (depth > 0) or dent (depth < 0). The center is given in
/// surface coordinates: arc length across the curvature, then the axis.
struct SeededDefect {
  double center_s = 0.0;
  double center_y = 0.0;
  double radius = 0.01;
  double depth = -1e-3;
};

/// Emulated line-scanner sweep. Lines are rows of constant s; points of a
/// line are ordered by y. The cylinder patch is concave (axis along y,
/// lowest point at the origin).
struct SyntheticScanSpec {
  SurfaceKind kind = SurfaceKind::Plane;
  double size_s = 0.1;  // m
  double size_y = 0.1;  // m
  double spacing = 1e-3;
  double cylinder_radius = 2.0;
  double noise_sigma = 0.0;
  std::vector<SeededDefect> defects;
  std::size_t spurious_points = 0;
  std::uint64_t seed = 0;

  /// Throws InvalidParameter.
  void validate() const;
};

struct GroundTruthDefect {
  SeededDefect seed;
  geom::Point3 center = geom::Point3::Zero();  // on the undisturbed surface
};

struct SyntheticScan {
  geom::PointCloud cloud;
  std::vector<GroundTruthDefect> defects;
  std::vector<std::size_t> spurious_ids;
};

SyntheticScan make_synthetic_scan(const SyntheticScanSpec& spec);

/// Undisturbed surface point and unit normal at surface coordinates (s, y).
geom::Point3 surface_point(const SyntheticScanSpec& spec, double s, double y);
geom::Vec3 surface_normal(const SyntheticScanSpec& spec, double s);

}  // namespace surfkit::perception
