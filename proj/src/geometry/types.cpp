#include "surfkit/geometry/types.hpp"

#include "surfkit/error.hpp"

#include <cmath>
#include <set>

namespace surfkit::geom {

void PointCloud::validate() const {
  for (const auto& p : points) {
    if (!p.allFinite()) throw Error(Errc::InvalidParameter, "point with non-finite coordinate");
  }
  if (line_index) {
    if (line_index->size() != points.size())
      throw Error(Errc::InvalidParameter, "line_index length differs from point count");
    std::set<int> closed;
    for (std::size_t i = 0; i < line_index->size(); ++i) {
      const int id = (*line_index)[i];
      if (id < 0) throw Error(Errc::InvalidParameter, "negative scan-line id");
      if (i > 0 && (*line_index)[i - 1] != id) {
        closed.insert((*line_index)[i - 1]);
        if (closed.count(id))
          throw Error(Errc::InvalidParameter,
                      "scan line " + std::to_string(id) + " is not stored consecutively");
      }
    }
  }
  if (normals) {
    if (normals->size() != points.size())
      throw Error(Errc::InvalidParameter, "normals length differs from point count");
    for (const auto& n : *normals) {
      if (std::abs(n.norm() - 1.0) > 1e-6) throw Error(Errc::InvalidParameter, "normal is not unit length");
    }
  }
}

PointCloud select(const PointCloud& cloud, const std::vector<std::size_t>& ids) {
  PointCloud out;
  out.meta = cloud.meta;
  out.view_axis = cloud.view_axis;
  out.points.reserve(ids.size());
  for (auto id : ids) out.points.push_back(cloud.points[id]);
  if (cloud.line_index) {
    out.line_index.emplace();
    out.line_index->reserve(ids.size());
    for (auto id : ids) out.line_index->push_back((*cloud.line_index)[id]);
  }
  if (cloud.normals) {
    out.normals.emplace();
    out.normals->reserve(ids.size());
    for (auto id : ids) out.normals->push_back((*cloud.normals)[id]);
  }
  return out;
}

RigidTransform RigidTransform::make(const Eigen::Matrix3d& rotation, const Vec3& translation) {
  if (!rotation.allFinite() || !translation.allFinite())
    throw Error(Errc::InvalidParameter, "non-finite transform");
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-9) throw Error(Errc::InvalidParameter, "rotation is not orthonormal");
  if (std::abs(rotation.determinant() - 1.0) > 1e-9)
    throw Error(Errc::InvalidParameter, "rotation is not proper (det != +1)");
  RigidTransform t;
  t.rotation = rotation;
  t.translation = translation;
  return t;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform t;
  t.rotation = rotation.transpose();
  t.translation = -(t.rotation * translation);
  return t;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  RigidTransform t;
  t.rotation = rotation * rhs.rotation;
  t.translation = rotation * rhs.translation + translation;
  return t;
}

Aabb Aabb::make(const Point3& min, const Point3& max) {
  if ((min.array() > max.array()).any()) throw Error(Errc::InvalidParameter, "Aabb min exceeds max");
  return Aabb{min, max};
}

bool Aabb::contains(const Point3& p) const {
  return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

Vec3 SurfaceFrame::to_local(const Point3& p) const {
  const Vec3 d = p - origin;
  return {d.dot(u), d.dot(v), d.dot(n)};
}

Point3 SurfaceFrame::to_world(const Vec3& local) const {
  return origin + local.x() * u + local.y() * v + local.z() * n;
}

}  // namespace surfkit::geom
