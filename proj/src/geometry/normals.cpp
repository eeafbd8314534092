#include "surfkit/geometry/normals.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/spatial_index.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace surfkit::geom {
namespace {

constexpr double kTieTolerance = 1e-6;

}  // namespace

PointCloud estimate_normals(const PointCloud& cloud, std::size_t k) {
  if (k < 3) throw Error(Errc::InvalidParameter, "normal estimation needs k >= 3");
  if (cloud.size() < k + 1)
    throw Error(Errc::InsufficientPoints, "normal estimation needs at least k + 1 points");

  const SpatialIndex index(cloud);
  PointCloud out = cloud;
  std::vector<Vec3> normals(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) normals[i] = estimate_normal_at(index, cloud, i, k);
  out.normals = std::move(normals);
  return out;
}

Vec3 estimate_normal_at(const SpatialIndex& index, const PointCloud& cloud, std::size_t id, std::size_t k) {
  const auto nn = index.knn(cloud.points[id], k + 1);
  Vec3 mean = Vec3::Zero();
  for (const auto& n : nn) mean += cloud.points[n.id];
  mean /= static_cast<double>(nn.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& n : nn) {
    const Vec3 d = cloud.points[n.id] - mean;
    cov += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  Vec3 normal = solver.eigenvectors().col(0).normalized();
  if (normal.dot(cloud.view_axis) < 0.0) normal = -normal;
  return normal;
}

SurfaceFrame pca_frame(const PointCloud& cloud) {
  if (cloud.size() < 3) throw Error(Errc::DegenerateInput, "principal frame needs at least 3 points");
  Vec3 mean = Vec3::Zero();
  for (const auto& p : cloud.points) mean += p;
  mean /= static_cast<double>(cloud.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : cloud.points) {
    const Vec3 d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(cloud.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Vec3 eval = solver.eigenvalues();  // ascending
  if (!(eval(2) > 0.0) || eval(1) <= 1e-12 * eval(2))
    throw Error(Errc::DegenerateInput, "points are colinear or coincident");

  SurfaceFrame f;
  f.origin = mean;
  f.n = solver.eigenvectors().col(0).normalized();
  if (f.n.dot(cloud.view_axis) < 0.0) f.n = -f.n;

  if (eval(2) - eval(1) <= kTieTolerance * eval(2)) {
    Vec3 ref = Vec3::UnitX() - Vec3::UnitX().dot(f.n) * f.n;
    if (ref.norm() < 1e-6) ref = Vec3::UnitY() - Vec3::UnitY().dot(f.n) * f.n;
    f.u = ref.normalized();
  } else {
    f.u = solver.eigenvectors().col(2).normalized();
    // Canonical sign: u points along +x (then +y, +z) where possible.
    const double sx = std::abs(f.u.x()) > 1e-12 ? f.u.x() : (std::abs(f.u.y()) > 1e-12 ? f.u.y() : f.u.z());
    if (sx < 0.0) f.u = -f.u;
    f.u = (f.u - f.u.dot(f.n) * f.n).normalized();
  }
  f.v = f.n.cross(f.u).normalized();

  for (const auto& p : cloud.points) {
    const Vec3 d = p - mean;
    f.extent_u = std::max(f.extent_u, std::abs(d.dot(f.u)));
    f.extent_v = std::max(f.extent_v, std::abs(d.dot(f.v)));
  }
  return f;
}

}  // namespace surfkit::geom
