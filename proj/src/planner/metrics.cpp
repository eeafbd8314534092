#include "surfkit/planner/metrics.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <cmath>

namespace surfkit::planner {

AlignmentMetrics alignment_metrics(const ToolPath& path, const geom::SpatialIndex& index) {
  AlignmentMetrics m;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& w : path.waypoints) {
    if (w.kind != SegmentKind::Contact) continue;
    const double d = index.nearest(w.position).distance;
    sum += d;
    sum2 += d * d;
    m.max = std::max(m.max, d);
    ++m.n_waypoints;
  }
  if (m.n_waypoints == 0) throw Error(Errc::NoContactWaypoints, "path has no contact waypoints");
  const auto n = static_cast<double>(m.n_waypoints);
  m.mae = sum / n;
  m.rmse = std::sqrt(sum2 / n);
  // Rounding can push the means past the max by an ulp.
  m.rmse = std::min(m.rmse, m.max);
  m.mae = std::min(m.mae, m.rmse);
  return m;
}

}  // namespace surfkit::planner
