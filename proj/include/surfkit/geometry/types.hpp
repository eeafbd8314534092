#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace surfkit::geom {

using Vec3 = Eigen::Vector3d;
/// Canonical unit is meters everywhere inside the library.
using Point3 = Eigen::Vector3d;

enum class LengthUnit { Meter, Millimeter };

struct CloudMeta {
  std::string source_id;
  LengthUnit declared_unit = LengthUnit::Meter;
};

/// Ordered point set with optional per-point scan-line ids and normals.
///
/// When `line_index` is present, points of one scan line are stored
/// consecutively. `view_axis` is the sensor-view direction used to orient
/// normals (+z of the scan frame unless overridden).
struct PointCloud {
  std::vector<Point3> points;
  std::optional<std::vector<int>> line_index;
  std::optional<std::vector<Vec3>> normals;
  CloudMeta meta;
  Vec3 view_axis = Vec3::UnitZ();

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  /// Throws InvalidParameter when an invariant is broken.
  void validate() const;
};

/// Subset of `cloud` in the order given by `ids`; per-point attributes follow.
PointCloud select(const PointCloud& cloud, const std::vector<std::size_t>& ids);

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  /// Validates orthonormality and det = +1 (1e-9).
  static RigidTransform make(const Eigen::Matrix3d& rotation, const Vec3& translation);

  Point3 apply(const Point3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;
  RigidTransform operator*(const RigidTransform& rhs) const;
};

struct Aabb {
  Point3 min;
  Point3 max;

  static Aabb make(const Point3& min, const Point3& max);
  bool contains(const Point3& p) const;
};

/// Principal frame of a surface patch: u has the largest variance, n the
/// smallest (surface normal, oriented toward the view axis).
struct SurfaceFrame {
  Point3 origin = Point3::Zero();
  Vec3 u = Vec3::UnitX();
  Vec3 v = Vec3::UnitY();
  Vec3 n = Vec3::UnitZ();
  double extent_u = 0.0;
  double extent_v = 0.0;

  /// Coordinates of p along (u, v, n) relative to the origin.
  Vec3 to_local(const Point3& p) const;
  Point3 to_world(const Vec3& local) const;
};

}  // namespace surfkit::geom
