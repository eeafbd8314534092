#pragma once

#include "surfkit/geometry/types.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace surfkit::geom {

struct Neighbor {
  std::size_t id;
  double distance;
};

/// Immutable k-d tree over a snapshot of a cloud's points.
///
/// Results are ordered by (distance, id) ascending, so queries are
/// reproducible and equal to an exhaustive scan with the same tie-break.
/// Copies share the snapshot; the index is safe to query from many threads.
class SpatialIndex {
 public:
  /// Throws EmptyCloud for an empty cloud.
  explicit SpatialIndex(const PointCloud& cloud);
  explicit SpatialIndex(std::vector<Point3> points);

  /// Exactly min(k, size()) neighbors. Throws InvalidParameter for k == 0.
  std::vector<Neighbor> knn(const Point3& query, std::size_t k) const;
  /// All points with distance <= radius.
  std::vector<Neighbor> radius(const Point3& query, double radius) const;
  /// Nearest point (id, distance).
  Neighbor nearest(const Point3& query) const;

  std::size_t size() const;
  const Point3& point(std::size_t id) const;
  const std::vector<Point3>& points() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace surfkit::geom
