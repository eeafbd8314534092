#pragma once

#include "surfkit/geometry/types.hpp"
#include "surfkit/planner/config.hpp"
#include "surfkit/planner/metrics.hpp"
#include "surfkit/planner/toolpath.hpp"

namespace surfkit::planner {

struct PlanResult {
  ToolPath path;
  AlignmentMetrics metrics;
};

/// Full pipeline: optional low-pass, principal frame, planarity check,
/// slicing, contours, meander, orientation, approach/depart. Afterwards
/// every contact waypoint is checked to lie within the band of a cloud
/// point (PlannerInvariant otherwise).
///
/// Throws EmptyCloud, NotProjectivelyPlanar, NoContours.
PlanResult plan_path(const geom::PointCloud& cloud, const PlannerConfig& cfg);

}  // namespace surfkit::planner
