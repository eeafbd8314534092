#include "surfkit/planner/plan.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/cloud_ops.hpp"
#include "surfkit/geometry/normals.hpp"
#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/planner/contour.hpp"
#include "surfkit/planner/slicing.hpp"

#include <cmath>
#include <sstream>

namespace surfkit::planner {

void PlannerConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidParameter, std::string(name) + " must be > 0");
  };
  positive(stepover, "stepover");
  if (band_halfwidth) positive(*band_halfwidth, "band_halfwidth");
  positive(waypoint_spacing, "waypoint_spacing");
  positive(clearance, "clearance");
  if (smoothing_window < 1 || smoothing_window % 2 == 0)
    throw Error(Errc::InvalidParameter, "smoothing_window must be a positive odd integer");
  if (!(angle_of_attack_deg >= 0.0 && angle_of_attack_deg <= 15.0))
    throw Error(Errc::InvalidParameter, "angle_of_attack_deg must be in [0, 15]");
  if (normal_k < 3) throw Error(Errc::InvalidParameter, "normal_k must be >= 3");
}

double resolve_band_halfwidth(const PlannerConfig& cfg, const geom::PointCloud& cloud) {
  if (cfg.band_halfwidth) return *cfg.band_halfwidth;
  return 1.5 * geom::median_spacing(cloud);
}

PlanResult plan_path(const geom::PointCloud& input, const PlannerConfig& cfg_in) {
  cfg_in.validate();
  if (input.empty()) throw Error(Errc::EmptyCloud, "cannot plan on an empty cloud");

  const geom::PointCloud cloud = cfg_in.lowpass_k > 0 ? geom::lowpass_filter(input, cfg_in.lowpass_k) : input;
  PlannerConfig cfg = cfg_in;
  const double band = resolve_band_halfwidth(cfg, cloud);
  cfg.band_halfwidth = band;

  const geom::SurfaceFrame frame = geom::pca_frame(cloud);
  const auto planar = check_projectively_planar(cloud, frame, 2.0 * band, 4.0 * band);
  if (!planar.ok) {
    std::ostringstream msg;
    msg << "surface is not projectively planar: " << planar.violations.size() << " cells exceed a height spread of "
        << 4.0 * band << " m";
    throw Error(Errc::NotProjectivelyPlanar, msg.str());
  }

  const geom::SpatialIndex index(cloud);
  std::vector<Contour> contours;
  std::vector<int> skipped;
  for (const auto& plane : define_slicing_planes(frame, cfg.stepover, band)) {
    try {
      contours.push_back(extract_contour(index, plane, frame, cfg, band));
    } catch (const Error& e) {
      if (e.code() != Errc::EmptyBand) throw;
      skipped.push_back(plane.id);
    }
  }
  if (contours.empty()) throw Error(Errc::NoContours, "no slicing plane produced a contour");

  const auto points = connect_meander(contours, cfg.waypoint_spacing);
  const NormalSource normals{index, cloud, cfg.normal_k};
  PlanResult result;
  result.path = add_approach_depart(orient_waypoints(points, normals, cfg.angle_of_attack_deg), cfg.clearance,
                                    cfg.waypoint_spacing);
  result.path.config = cfg;
  result.path.source_id = input.meta.source_id;
  result.path.frame = frame;
  result.path.skipped_planes = std::move(skipped);

  for (std::size_t i = 0; i < result.path.waypoints.size(); ++i) {
    const auto& w = result.path.waypoints[i];
    if (w.kind != SegmentKind::Contact) continue;
    const double d = index.nearest(w.position).distance;
    if (d > band) {
      std::ostringstream msg;
      msg << "contact waypoint " << i << " is " << d << " m from the cloud (band " << band << " m)";
      throw Error(Errc::PlannerInvariant, msg.str());
    }
  }
  result.metrics = alignment_metrics(result.path, index);
  return result;
}

}  // namespace surfkit::planner
