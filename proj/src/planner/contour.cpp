#include "surfkit/planner/contour.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace surfkit::planner {
namespace {

std::vector<double> cumulative(const std::vector<geom::Point3>& pts) {
  std::vector<double> arc(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) arc[i] = arc[i - 1] + (pts[i] - pts[i - 1]).norm();
  return arc;
}

std::vector<geom::Point3> moving_average(const std::vector<geom::Point3>& pts, int window) {
  const auto half_max = static_cast<std::size_t>(std::max(0, window / 2));
  std::vector<geom::Point3> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t half = std::min({half_max, i, pts.size() - 1 - i});
    geom::Vec3 sum = geom::Vec3::Zero();
    for (std::size_t j = i - half; j <= i + half; ++j) sum += pts[j];
    out[i] = sum / static_cast<double>(2 * half + 1);
  }
  return out;
}

geom::Point3 catmull_rom(const geom::Point3& p0, const geom::Point3& p1, const geom::Point3& p2,
                         const geom::Point3& p3, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
}

std::vector<geom::Point3> resample(const std::vector<geom::Point3>& pts, double spacing, Interpolation mode) {
  const auto arc = cumulative(pts);
  const double total = arc.back();
  const auto segments = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(total / spacing)));
  std::vector<geom::Point3> out;
  out.reserve(segments + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= segments; ++k) {
    if (k == segments) {
      out.push_back(pts.back());
      break;
    }
    const double s = total * static_cast<double>(k) / static_cast<double>(segments);
    while (seg + 2 < pts.size() && arc[seg + 1] <= s) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double t = len > 0.0 ? (s - arc[seg]) / len : 0.0;
    if (mode == Interpolation::Linear) {
      out.push_back(pts[seg] + t * (pts[seg + 1] - pts[seg]));
    } else {
      const auto& p0 = pts[seg == 0 ? 0 : seg - 1];
      const auto& p3 = pts[std::min(seg + 2, pts.size() - 1)];
      out.push_back(catmull_rom(p0, pts[seg], pts[seg + 1], p3, t));
    }
  }
  return out;
}

}  // namespace

Contour extract_contour(const geom::SpatialIndex& index, const SlicingPlane& plane, const geom::SurfaceFrame& frame,
                        const PlannerConfig& cfg, double band_halfwidth) {
  struct Entry {
    double key;
    std::size_t id;
    geom::Point3 projected;
  };
  std::vector<Entry> band;
  const auto& pts = index.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - plane.point).dot(plane.normal);
    if (std::abs(d) > band_halfwidth) continue;
    const geom::Point3 q = pts[i] - d * plane.normal;
    band.push_back({(q - frame.origin).dot(frame.v), i, q});
  }
  std::sort(band.begin(), band.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key || (a.key == b.key && a.id < b.id); });

  std::vector<geom::Point3> kept;
  const double min_gap = cfg.waypoint_spacing / 4.0;
  for (const auto& e : band) {
    if (!kept.empty() && (e.projected - kept.back()).norm() < min_gap) continue;
    kept.push_back(e.projected);
  }
  if (kept.size() < 2)
    throw Error(Errc::EmptyBand, "plane " + std::to_string(plane.id) + " has fewer than 2 points in its band");

  const auto smooth = moving_average(kept, cfg.smoothing_window);
  if (cumulative(smooth).back() <= 0.0)
    throw Error(Errc::EmptyBand, "plane " + std::to_string(plane.id) + " band collapses to a point");

  Contour c;
  c.plane_id = plane.id;
  c.points = resample(smooth, cfg.waypoint_spacing, cfg.interpolation);
  c.arc = cumulative(c.points);
  return c;
}

}  // namespace surfkit::planner
