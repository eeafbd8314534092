#pragma once

#include "surfkit/geometry/types.hpp"

#include <cstddef>

namespace surfkit::geom {

/// One point per occupied voxel at the centroid of its members. The grid is
/// anchored at the cloud's min corner (voxel = floor((p - min) / leaf));
/// output is ordered by voxel key. Line ids and normals are dropped.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf);

/// Keeps points inside the closed box, preserving order and attributes.
PointCloud crop_box(const PointCloud& cloud, const Aabb& box);

/// p' = R p + t; normals are rotated only.
PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& transform);

/// Median nearest-neighbor distance, estimated on at most `max_samples`
/// evenly strided points. Throws InsufficientPoints for fewer than 2 points.
double median_spacing(const PointCloud& cloud, std::size_t max_samples = 2000);

/// Global low-pass: every point moves to the centroid of its k nearest
/// neighbors (itself included). Attributes are preserved.
PointCloud lowpass_filter(const PointCloud& cloud, std::size_t k);

}  // namespace surfkit::geom
