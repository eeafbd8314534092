#pragma once

#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/planner/toolpath.hpp"

#include <cstddef>

namespace surfkit::planner {

struct AlignmentMetrics {
  double rmse = 0.0;  // m
  double mae = 0.0;
  double max = 0.0;
  std::size_t n_waypoints = 0;
};

/// Distance from each contact waypoint to the closest cloud point.
/// Throws NoContactWaypoints.
AlignmentMetrics alignment_metrics(const ToolPath& path, const geom::SpatialIndex& index);

}  // namespace surfkit::planner
