#pragma once

#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/geometry/types.hpp"

#include <cstddef>

namespace surfkit::geom {

/// Per-point normal from the smallest-eigenvalue eigenvector of the
/// covariance of the point and its k nearest neighbors, flipped to have a
/// non-negative dot with `cloud.view_axis`.
///
/// Throws InvalidParameter for k < 3, InsufficientPoints when the cloud has
/// fewer than k + 1 points.
PointCloud estimate_normals(const PointCloud& cloud, std::size_t k);

/// Normal of a single point, identical to the one estimate_normals assigns.
/// `index` must be built over `cloud`.
Vec3 estimate_normal_at(const SpatialIndex& index, const PointCloud& cloud, std::size_t id, std::size_t k);

/// Principal frame: origin at the centroid, axes ordered by descending
/// variance, n oriented toward the view axis, (u, v, n) right-handed.
///
/// When the two in-plane variances tie (relative gap < 1e-6) u is taken as
/// the x axis projected into the plane so the frame stays deterministic.
/// Throws DegenerateInput for fewer than 3 or colinear points.
SurfaceFrame pca_frame(const PointCloud& cloud);

}  // namespace surfkit::geom
