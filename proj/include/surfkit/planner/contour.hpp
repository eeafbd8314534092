#pragma once

#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/planner/config.hpp"
#include "surfkit/planner/slicing.hpp"

#include <vector>

namespace surfkit::planner {

struct Contour {
  int plane_id = 0;
  std::vector<geom::Point3> points;
  std::vector<double> arc;  // cumulative length, strictly increasing
};

/// Cross-section of the indexed cloud with one plane: band selection,
/// projection, sort along frame.v, near-duplicate filter, centered moving
/// average and uniform resampling at cfg.waypoint_spacing.
///
/// Throws EmptyBand when fewer than two usable points remain.
Contour extract_contour(const geom::SpatialIndex& index, const SlicingPlane& plane, const geom::SurfaceFrame& frame,
                        const PlannerConfig& cfg, double band_halfwidth);

}  // namespace surfkit::planner
