#pragma once

#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/geometry/types.hpp"
#include "surfkit/planner/config.hpp"
#include "surfkit/planner/contour.hpp"

#include <Eigen/Geometry>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surfkit::planner {

enum class SegmentKind { Contact, Connect, Approach, Depart };

std::string_view to_string(SegmentKind kind);
/// Throws ParseError.
SegmentKind segment_kind_from_string(std::string_view s);

struct PathPoint {
  geom::Point3 position = geom::Point3::Zero();
  SegmentKind kind = SegmentKind::Contact;
  int contour = -1;  // index into the contour list for contact points
};

/// Tool pose: z points into the surface, x along the travel direction.
struct Waypoint {
  geom::Point3 position = geom::Point3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  geom::Vec3 travel = geom::Vec3::UnitX();
  SegmentKind kind = SegmentKind::Contact;
  int contour = -1;

  geom::Vec3 tool_z() const { return orientation * geom::Vec3::UnitZ(); }
};

struct ToolPath {
  std::vector<Waypoint> waypoints;
  PlannerConfig config;  // band_halfwidth resolved
  std::string source_id;
  geom::SurfaceFrame frame;
  std::vector<int> skipped_planes;
  double total_length = 0.0;
};

/// Even contours keep their order, odd ones are reversed; consecutive
/// contours are joined by straight connect points every `spacing`.
/// Throws NoContours.
std::vector<PathPoint> connect_meander(const std::vector<Contour>& contours, double spacing);

/// Surface normals come from the nearest cloud point: the stored normal
/// when present, otherwise estimated on demand from `normal_k` neighbors.
struct NormalSource {
  const geom::SpatialIndex& index;
  const geom::PointCloud& cloud;
  std::size_t normal_k = 16;

  geom::Vec3 at(const geom::Point3& p) const;
};

/// Tool z = -(surface normal rotated by alpha about the travel direction);
/// travel is the central difference inside each run of equal kind and
/// contour. Throws MissingNormals when the source cannot provide normals.
std::vector<Waypoint> orient_waypoints(const std::vector<PathPoint>& points, const NormalSource& normals,
                                       double alpha_deg);

/// Straight approach from `clearance` behind the first waypoint (along its
/// -tool z) and the mirrored depart after the last, both sampled every
/// `spacing`. Throws NoContours on an empty path.
ToolPath add_approach_depart(std::vector<Waypoint> waypoints, double clearance, double spacing);

double path_length(const std::vector<Waypoint>& waypoints);

}  // namespace surfkit::planner
