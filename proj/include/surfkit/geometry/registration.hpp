#pragma once

#include "surfkit/geometry/types.hpp"

#include <span>

namespace surfkit::geom {

/// Closed-form least-squares rigid registration (SVD of the cross
/// covariance). Minimizes sum |R src_i + t - dst_i|^2 over proper rotations;
/// a reflection solution is corrected by negating the last singular axis.
///
/// Throws DegenerateInput for mismatched sizes, fewer than 3 pairs, or a
/// colinear source set.
RigidTransform estimate_rigid_transform(std::span<const Point3> src, std::span<const Point3> dst);

/// Root-mean-square residual of `transform` over the correspondences.
double registration_rms(std::span<const Point3> src, std::span<const Point3> dst,
                        const RigidTransform& transform);

}  // namespace surfkit::geom
