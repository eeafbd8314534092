#include "surfkit/geometry/cloud_ops.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/spatial_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace surfkit::geom {

PointCloud voxel_downsample(const PointCloud& cloud, double leaf) {
  if (!(leaf > 0.0) || !std::isfinite(leaf)) throw Error(Errc::InvalidParameter, "voxel leaf must be > 0");
  PointCloud out;
  out.meta = cloud.meta;
  out.view_axis = cloud.view_axis;
  if (cloud.empty()) return out;

  Point3 lo = cloud.points.front();
  for (const auto& p : cloud.points) lo = lo.cwiseMin(p);

  struct Acc {
    Vec3 sum = Vec3::Zero();
    std::size_t count = 0;
  };
  std::map<std::array<long long, 3>, Acc> voxels;
  for (const auto& p : cloud.points) {
    const std::array<long long, 3> key{static_cast<long long>(std::floor((p.x() - lo.x()) / leaf)),
                                       static_cast<long long>(std::floor((p.y() - lo.y()) / leaf)),
                                       static_cast<long long>(std::floor((p.z() - lo.z()) / leaf))};
    auto& acc = voxels[key];
    acc.sum += p;
    ++acc.count;
  }
  out.points.reserve(voxels.size());
  for (const auto& [key, acc] : voxels) out.points.push_back(acc.sum / static_cast<double>(acc.count));
  return out;
}

PointCloud crop_box(const PointCloud& cloud, const Aabb& box) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (box.contains(cloud.points[i])) keep.push_back(i);
  }
  return select(cloud, keep);
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& transform) {
  PointCloud out = cloud;
  for (auto& p : out.points) p = transform.apply(p);
  if (out.normals) {
    for (auto& n : *out.normals) n = transform.rotation * n;
  }
  out.view_axis = transform.rotation * cloud.view_axis;
  return out;
}

double median_spacing(const PointCloud& cloud, std::size_t max_samples) {
  if (cloud.size() < 2) throw Error(Errc::InsufficientPoints, "spacing needs at least 2 points");
  const SpatialIndex index(cloud);
  const std::size_t stride = std::max<std::size_t>(1, cloud.size() / std::max<std::size_t>(1, max_samples));
  std::vector<double> d;
  for (std::size_t i = 0; i < cloud.size(); i += stride) {
    const auto nn = index.knn(cloud.points[i], 2);
    // The first hit is the point itself unless duplicates share its position.
    d.push_back(nn[0].id == i ? nn[1].distance : nn[0].distance);
  }
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

PointCloud lowpass_filter(const PointCloud& cloud, std::size_t k) {
  if (k < 1) throw Error(Errc::InvalidParameter, "low-pass filter needs k >= 1");
  if (cloud.empty()) return cloud;
  const SpatialIndex index(cloud);
  PointCloud out = cloud;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    Vec3 sum = Vec3::Zero();
    const auto nn = index.knn(cloud.points[i], k);
    for (const auto& n : nn) sum += cloud.points[n.id];
    out.points[i] = sum / static_cast<double>(nn.size());
  }
  return out;
}

}  // namespace surfkit::geom
