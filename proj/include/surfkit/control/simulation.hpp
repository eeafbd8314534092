#pragma once

#include "surfkit/control/pid.hpp"
#include "surfkit/control/plant.hpp"
#include "surfkit/control/surface_model.hpp"
#include "surfkit/control/wrench.hpp"
#include "surfkit/planner/toolpath.hpp"

#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace surfkit::control {

struct TrajectorySample {
  double t = 0.0;
  planner::SegmentKind kind = planner::SegmentKind::Approach;
  geom::Point3 commanded = geom::Point3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  geom::Point3 actual = geom::Point3::Zero();
  Vec6 wrench = Vec6::Zero();  // measured
  Vec6 error = Vec6::Zero();
  geom::Vec3 u_pose = geom::Vec3::Zero();
  Vec6 u_wrench = Vec6::Zero();  // accumulated admittance offset, tool frame
  bool outside = false;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  bool success = true;
  std::string failure_reason;  // "ForceLimitExceeded" on abort
};

struct ControlMetrics {
  double mae = 0.0;                       // N
  std::optional<double> max_after_rise;   // N
  std::optional<double> rise_time;        // s after the first contact sample
  double setpoint = 0.0;                  // N
  std::size_t contact_samples = 0;
  bool success = true;
  std::string failure_reason;
};

struct SimulationResult {
  Trajectory trajectory;
  ControlMetrics metrics;
};

/// Fixed-step execution of `path` at plant.feed. Each step measures the
/// plant (plus sensor noise), forms the region error, runs the PID on
/// contact and connect segments and adds admittance * u to the
/// accumulated offset along the tool axes. Approach and depart follow the
/// path exactly with the controller reset. Aborts with ForceLimitExceeded
/// when a translational force leaves the limit.
///
/// Throws NoContactWaypoints.
SimulationResult simulate_execution(const planner::ToolPath& path, const WrenchRegion& region, const PidGains& gains,
                                    const PlantConfig& plant, std::uint64_t seed, const HeightField& surface);

/// Rise time: first contact sample with Fz >= 0.9 setpoint. MAE: contact
/// samples from the rise on. MAX: contact samples from the first one at
/// or above the setpoint. Throws EmptyTrajectory.
ControlMetrics control_metrics(const Trajectory& trajectory, const WrenchRegion& region);

}  // namespace surfkit::control
