#include "surfkit/control/simulation.hpp"

#include "surfkit/error.hpp"

#include <cmath>

namespace surfkit::control {

using planner::SegmentKind;

ControlMetrics control_metrics(const Trajectory& traj, const WrenchRegion& region) {
  if (traj.samples.empty()) throw Error(Errc::EmptyTrajectory, "trajectory has no samples");
  ControlMetrics m;
  m.setpoint = region.fz_setpoint();
  m.success = traj.success;
  m.failure_reason = traj.failure_reason;

  std::vector<const TrajectorySample*> contact;
  for (const auto& s : traj.samples) {
    if (s.kind == SegmentKind::Contact) contact.push_back(&s);
  }
  m.contact_samples = contact.size();
  if (contact.empty()) return m;

  std::size_t rise = contact.size(), reached = contact.size();
  for (std::size_t i = 0; i < contact.size(); ++i) {
    const double fz = contact[i]->wrench(2);
    if (rise == contact.size() && fz >= 0.9 * m.setpoint) rise = i;
    if (fz >= m.setpoint) {
      reached = i;
      break;
    }
  }
  if (rise < contact.size()) m.rise_time = contact[rise]->t - contact.front()->t;

  const std::size_t from = rise < contact.size() ? rise : 0;
  double sum = 0.0;
  for (std::size_t i = from; i < contact.size(); ++i) sum += std::abs(contact[i]->wrench(2) - m.setpoint);
  m.mae = sum / static_cast<double>(contact.size() - from);

  if (reached < contact.size()) {
    double mx = 0.0;
    for (std::size_t i = reached; i < contact.size(); ++i) mx = std::max(mx, std::abs(contact[i]->wrench(2) - m.setpoint));
    m.max_after_rise = mx;
  }
  return m;
}

}  // namespace surfkit::control
