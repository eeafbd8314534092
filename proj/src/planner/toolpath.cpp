#include "surfkit/planner/toolpath.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/normals.hpp"

#include <cmath>
#include <numbers>

namespace surfkit::planner {
namespace {

void append_unique(std::vector<PathPoint>& out, const PathPoint& p) {
  if (!out.empty() && out.back().position == p.position) return;
  out.push_back(p);
}

// Interior samples of the segment a->b, endpoints excluded.
std::vector<geom::Point3> interior_samples(const geom::Point3& a, const geom::Point3& b, double spacing) {
  const double d = (b - a).norm();
  const auto n = std::max<long long>(1, std::llround(d / spacing));
  std::vector<geom::Point3> out;
  for (long long k = 1; k < n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / static_cast<double>(n)));
  return out;
}

Eigen::Quaterniond frame_quaternion(const geom::Vec3& travel, const geom::Vec3& z) {
  geom::Vec3 x = travel - travel.dot(z) * z;
  if (x.norm() < 1e-9) {
    // Travel parallel to the tool axis: any perpendicular works.
    x = std::abs(z.x()) < 0.9 ? geom::Vec3::UnitX() : geom::Vec3::UnitY();
    x = (x - x.dot(z) * z);
  }
  x.normalize();
  const geom::Vec3 y = z.cross(x);
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return q;
}

}  // namespace

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Contact: return "contact";
    case SegmentKind::Connect: return "connect";
    case SegmentKind::Approach: return "approach";
    case SegmentKind::Depart: return "depart";
  }
  return "contact";
}

SegmentKind segment_kind_from_string(std::string_view s) {
  if (s == "contact") return SegmentKind::Contact;
  if (s == "connect") return SegmentKind::Connect;
  if (s == "approach") return SegmentKind::Approach;
  if (s == "depart") return SegmentKind::Depart;
  throw Error(Errc::ParseError, "unknown segment kind '" + std::string(s) + "'");
}

std::vector<PathPoint> connect_meander(const std::vector<Contour>& contours, double spacing) {
  if (!(spacing > 0.0)) throw Error(Errc::InvalidParameter, "connect spacing must be > 0");
  std::vector<PathPoint> out;
  int index = 0;
  for (const auto& c : contours) {
    if (c.points.empty()) continue;
    std::vector<geom::Point3> pts = c.points;
    if (index % 2 == 1) std::reverse(pts.begin(), pts.end());
    if (!out.empty()) {
      for (const auto& p : interior_samples(out.back().position, pts.front(), spacing))
        append_unique(out, {p, SegmentKind::Connect, -1});
    }
    for (const auto& p : pts) append_unique(out, {p, SegmentKind::Contact, index});
    ++index;
  }
  if (out.empty()) throw Error(Errc::NoContours, "no contour to connect");
  return out;
}

geom::Vec3 NormalSource::at(const geom::Point3& p) const {
  const auto nearest = index.nearest(p);
  if (cloud.normals) return (*cloud.normals)[nearest.id];
  if (cloud.size() < normal_k + 1) throw Error(Errc::MissingNormals, "cloud too small to estimate normals");
  return geom::estimate_normal_at(index, cloud, nearest.id, normal_k);
}

std::vector<Waypoint> orient_waypoints(const std::vector<PathPoint>& points, const NormalSource& normals,
                                       double alpha_deg) {
  if (points.empty()) throw Error(Errc::NoContours, "no waypoints to orient");
  const double alpha = alpha_deg * std::numbers::pi / 180.0;
  std::vector<Waypoint> out(points.size());

  std::size_t begin = 0;
  while (begin < points.size()) {
    std::size_t end = begin + 1;
    while (end < points.size() && points[end].kind == points[begin].kind &&
           points[end].contour == points[begin].contour)
      ++end;
    for (std::size_t i = begin; i < end; ++i) {
      // A single-point run borrows its neighbors across the run boundary.
      const std::size_t first = end - begin > 1 ? begin : 0;
      const std::size_t last = end - begin > 1 ? end - 1 : points.size() - 1;
      const std::size_t lo = i > first ? i - 1 : i;
      const std::size_t hi = i < last ? i + 1 : i;
      geom::Vec3 travel = points[hi].position - points[lo].position;
      if (travel.norm() < 1e-12) travel = geom::Vec3::UnitX();
      travel.normalize();

      const geom::Vec3 n = normals.at(points[i].position);
      const geom::Vec3 tilted = Eigen::AngleAxisd(alpha, travel) * n;
      Waypoint& w = out[i];
      w.position = points[i].position;
      w.kind = points[i].kind;
      w.contour = points[i].contour;
      w.travel = travel;
      w.orientation = frame_quaternion(travel, -tilted.normalized());
    }
    begin = end;
  }
  return out;
}

ToolPath add_approach_depart(std::vector<Waypoint> waypoints, double clearance, double spacing) {
  if (waypoints.empty()) throw Error(Errc::NoContours, "empty path");
  if (!(clearance > 0.0) || !(spacing > 0.0)) throw Error(Errc::InvalidParameter, "clearance and spacing must be > 0");

  const Waypoint first = waypoints.front();
  const Waypoint last = waypoints.back();
  const geom::Point3 start = first.position - clearance * first.tool_z();
  const geom::Point3 stop = last.position - clearance * last.tool_z();

  auto lead = [&](const Waypoint& ref, const geom::Point3& p, SegmentKind kind) {
    Waypoint w = ref;
    w.position = p;
    w.kind = kind;
    w.contour = -1;
    w.travel = (kind == SegmentKind::Approach ? ref.tool_z() : -ref.tool_z());
    return w;
  };

  ToolPath path;
  path.waypoints.push_back(lead(first, start, SegmentKind::Approach));
  for (const auto& p : interior_samples(start, first.position, spacing))
    path.waypoints.push_back(lead(first, p, SegmentKind::Approach));
  path.waypoints.insert(path.waypoints.end(), waypoints.begin(), waypoints.end());
  for (const auto& p : interior_samples(last.position, stop, spacing))
    path.waypoints.push_back(lead(last, p, SegmentKind::Depart));
  path.waypoints.push_back(lead(last, stop, SegmentKind::Depart));
  path.total_length = path_length(path.waypoints);
  return path;
}

double path_length(const std::vector<Waypoint>& waypoints) {
  double len = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) len += (waypoints[i].position - waypoints[i - 1].position).norm();
  return len;
}

}  // namespace surfkit::planner
