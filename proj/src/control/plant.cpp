#include "surfkit/control/plant.hpp"

#include "surfkit/error.hpp"

#include <cmath>
#include <numbers>

namespace surfkit::control {

double Vibration::offset(double t) const {
  if (amplitude == 0.0) return 0.0;
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
}

void PlantConfig::validate() const {
  if (!(contact_stiffness > 0.0)) throw Error(Errc::InvalidParameter, "contact stiffness must be > 0");
  if (!(contact_damping >= 0.0)) throw Error(Errc::InvalidParameter, "contact damping must be >= 0");
  if (!(admittance > 0.0)) throw Error(Errc::InvalidParameter, "admittance must be > 0");
  if (!(force_limit > 0.0)) throw Error(Errc::InvalidParameter, "force limit must be > 0");
  if (!(dt > 0.0)) throw Error(Errc::InvalidParameter, "time step must be > 0");
  if (!(noise_sigma >= 0.0)) throw Error(Errc::InvalidParameter, "noise sigma must be >= 0");
  if (!(feed > 0.0)) throw Error(Errc::InvalidParameter, "feed must be > 0");
  if (!(vibration.amplitude >= 0.0) || !(vibration.frequency >= 0.0))
    throw Error(Errc::InvalidParameter, "vibration amplitude and frequency must be >= 0");
}

Vec6 contact_wrench(double penetration, double penetration_rate, const PlantConfig& plant) {
  Vec6 w = Vec6::Zero();
  if (penetration <= 0.0) return w;
  w(2) = plant.contact_stiffness * penetration + plant.contact_damping * std::max(0.0, penetration_rate);
  return w;
}

ContactState contact_force(const geom::Point3& tool, const HeightField& surface, double surface_offset,
                           const PlantConfig& plant, double previous_penetration) {
  ContactState s;
  const geom::Vec3 local = surface.frame().to_local(tool);
  const auto h = surface.height(local.x(), local.y());
  if (!h) {
    s.outside = true;
    return s;
  }
  s.penetration = std::max(0.0, *h + surface_offset - local.z());
  s.wrench = contact_wrench(s.penetration, (s.penetration - previous_penetration) / plant.dt, plant);
  return s;
}

}  // namespace surfkit::control
