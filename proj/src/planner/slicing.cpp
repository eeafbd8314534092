#include "surfkit/planner/slicing.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace surfkit::planner {

std::vector<SlicingPlane> define_slicing_planes(const geom::SurfaceFrame& frame, double stepover, double inset) {
  if (!(stepover > 0.0) || !std::isfinite(stepover)) throw Error(Errc::InvalidParameter, "stepover must be > 0");
  if (!(frame.extent_u >= 0.0)) throw Error(Errc::InvalidParameter, "frame extent must be >= 0");

  const auto count = static_cast<int>(std::floor(2.0 * frame.extent_u / stepover + 1e-9)) + 1;
  const double limit = std::max(0.0, frame.extent_u - std::max(0.0, inset));
  std::vector<SlicingPlane> planes;
  planes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double offset = std::clamp((i - (count - 1) / 2.0) * stepover, -limit, limit);
    if (!planes.empty() && offset <= planes.back().offset) continue;
    SlicingPlane p;
    p.id = static_cast<int>(planes.size());
    p.offset = offset;
    p.normal = frame.u;
    p.point = frame.origin + offset * frame.u;
    planes.push_back(p);
  }
  return planes;
}

PlanarityCheck check_projectively_planar(const geom::PointCloud& cloud, const geom::SurfaceFrame& frame,
                                         double cell, double max_spread) {
  if (!(cell > 0.0)) throw Error(Errc::InvalidParameter, "planarity cell must be > 0");
  std::map<std::pair<long long, long long>, std::pair<double, double>> cells;
  for (const auto& p : cloud.points) {
    const geom::Vec3 l = frame.to_local(p);
    const std::pair<long long, long long> key{static_cast<long long>(std::floor(l.x() / cell)),
                                              static_cast<long long>(std::floor(l.y() / cell))};
    auto [it, inserted] = cells.try_emplace(key, l.z(), l.z());
    if (!inserted) {
      it->second.first = std::min(it->second.first, l.z());
      it->second.second = std::max(it->second.second, l.z());
    }
  }
  PlanarityCheck out;
  for (const auto& [key, range] : cells) {
    const double spread = range.second - range.first;
    if (spread >= max_spread) out.violations.push_back({key.first, key.second, spread});
  }
  out.ok = out.violations.empty();
  return out;
}

}  // namespace surfkit::planner
