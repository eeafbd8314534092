#pragma once

#include "surfkit/geometry/types.hpp"

#include <vector>

namespace surfkit::planner {

struct SlicingPlane {
  int id = 0;
  geom::Point3 point = geom::Point3::Zero();
  geom::Vec3 normal = geom::Vec3::UnitX();
  double offset = 0.0;  // position along frame.u relative to the origin
};

/// Planes normal to frame.u, `stepover` apart and centered on the origin,
/// floor(2 extent_u / stepover) + 1 of them. Planes closer than `inset` to
/// the edge of the extent are pulled inward so their band is not starved.
std::vector<SlicingPlane> define_slicing_planes(const geom::SurfaceFrame& frame, double stepover,
                                                double inset = 0.0);

struct PlanarityCheck {
  struct Cell {
    long long iu = 0;
    long long iv = 0;
    double spread = 0.0;
  };
  bool ok = true;
  std::vector<Cell> violations;
};

/// Rasterizes (u, v) into square cells and fails every occupied cell whose
/// height range along n reaches `max_spread`.
PlanarityCheck check_projectively_planar(const geom::PointCloud& cloud, const geom::SurfaceFrame& frame,
                                         double cell, double max_spread);

}  // namespace surfkit::planner
