#include "surfkit/geometry/registration.hpp"

#include "surfkit/error.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace surfkit::geom {

RigidTransform estimate_rigid_transform(std::span<const Point3> src, std::span<const Point3> dst) {
  if (src.size() != dst.size()) throw Error(Errc::DegenerateInput, "correspondence sets differ in size");
  if (src.size() < 3) throw Error(Errc::DegenerateInput, "registration needs at least 3 correspondences");

  const auto n = static_cast<double>(src.size());
  Vec3 cs = Vec3::Zero(), cd = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += src[i];
    cd += dst[i];
  }
  cs /= n;
  cd /= n;

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d spread = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec3 a = src[i] - cs;
    h += a * (dst[i] - cd).transpose();
    spread += a * a.transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> spread_svd(spread);
  const auto s = spread_svd.singularValues();
  if (!(s(0) > 0.0) || s(1) <= 1e-12 * s(0)) throw Error(Errc::DegenerateInput, "source points are colinear");

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;

  RigidTransform t;
  t.rotation = v * d * u.transpose();
  t.translation = cd - t.rotation * cs;
  return t;
}

double registration_rms(std::span<const Point3> src, std::span<const Point3> dst,
                        const RigidTransform& transform) {
  if (src.empty() || src.size() != dst.size()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) sum += (transform.apply(src[i]) - dst[i]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(src.size()));
}

}  // namespace surfkit::geom
