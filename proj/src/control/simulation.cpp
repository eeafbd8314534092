#include "surfkit/control/simulation.hpp"

#include "surfkit/error.hpp"
#include "surfkit/random.hpp"

#include <algorithm>
#include <cmath>

namespace surfkit::control {
namespace {

using planner::SegmentKind;

// Arc-length parametrization of the waypoint polyline.
class PathCursor {
 public:
  explicit PathCursor(const planner::ToolPath& path) : wps_(path.waypoints), arc_(wps_.size(), 0.0) {
    for (std::size_t i = 1; i < wps_.size(); ++i) arc_[i] = arc_[i - 1] + (wps_[i].position - wps_[i - 1].position).norm();
  }

  double length() const { return arc_.back(); }

  void seek(double s, geom::Point3& position, Eigen::Quaterniond& orientation, SegmentKind& kind) {
    while (seg_ + 1 < wps_.size() - 1 && arc_[seg_ + 1] <= s) ++seg_;
    if (wps_.size() == 1) {
      position = wps_[0].position;
      orientation = wps_[0].orientation;
      kind = wps_[0].kind;
      return;
    }
    const auto& a = wps_[seg_];
    const auto& b = wps_[seg_ + 1];
    const double len = arc_[seg_ + 1] - arc_[seg_];
    const double t = len > 0.0 ? std::clamp((s - arc_[seg_]) / len, 0.0, 1.0) : 0.0;
    position = a.position + t * (b.position - a.position);
    orientation = a.orientation.slerp(t, b.orientation).normalized();
    kind = t >= 1.0 ? b.kind : a.kind;
  }

 private:
  const std::vector<planner::Waypoint>& wps_;
  std::vector<double> arc_;
  std::size_t seg_ = 0;
};

bool controlled(SegmentKind k) { return k == SegmentKind::Contact || k == SegmentKind::Connect; }

}  // namespace

SimulationResult simulate_execution(const planner::ToolPath& path, const WrenchRegion& region, const PidGains& gains,
                                    const PlantConfig& plant, std::uint64_t seed, const HeightField& surface) {
  plant.validate();
  gains.validate();
  bool has_contact = false;
  for (const auto& w : path.waypoints) has_contact = has_contact || w.kind == SegmentKind::Contact;
  if (!has_contact) throw Error(Errc::NoContactWaypoints, "path has no contact waypoints");

  PathCursor cursor(path);
  const double length = cursor.length();
  const auto steps = static_cast<std::size_t>(std::ceil(length / (plant.feed * plant.dt) - 1e-9));

  NormalSampler noise(seed);
  PidState pid;
  Vec6 offset = Vec6::Zero();
  double penetration = 0.0;
  geom::Point3 previous_actual = path.waypoints.front().position;

  SimulationResult result;
  Trajectory& traj = result.trajectory;
  traj.dt = plant.dt;
  traj.samples.reserve(steps + 1);

  for (std::size_t k = 0; k <= steps; ++k) {
    TrajectorySample s;
    s.t = static_cast<double>(k) * plant.dt;
    geom::Point3 planned;
    cursor.seek(std::min(length, plant.feed * s.t), planned, s.orientation, s.kind);

    if (!controlled(s.kind)) {
      pid.reset();
      offset.setZero();
    }
    const Eigen::Matrix3d r = s.orientation.toRotationMatrix();
    s.commanded = planned + r * offset.head<3>();
    s.actual = s.commanded;
    s.u_pose = planned - previous_actual;
    s.u_wrench = offset;
    previous_actual = s.actual;

    const ContactState contact = contact_force(s.actual, surface, plant.vibration.offset(s.t), plant, penetration);
    penetration = contact.penetration;
    s.outside = contact.outside;
    s.wrench = contact.wrench;
    if (plant.noise_sigma > 0.0) {
      for (int i = 0; i < 3; ++i) s.wrench(i) += plant.noise_sigma * noise();
    }
    s.error = wrench_region_error(s.wrench, region);

    const bool over_limit = (s.wrench.head<3>().array().abs() > plant.force_limit).any();
    if (!over_limit && controlled(s.kind)) offset += plant.admittance * pid_step(pid, s.error, plant.dt, gains);
    traj.samples.push_back(s);
    if (over_limit) {
      traj.success = false;
      traj.failure_reason = "ForceLimitExceeded";
      break;
    }
  }
  result.metrics = control_metrics(traj, region);
  return result;
}

}  // namespace surfkit::control
