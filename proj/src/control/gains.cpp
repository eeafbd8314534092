#include "surfkit/control/gains.hpp"

namespace surfkit::control {

PidGains tune_gains_default(const PlantConfig& plant, const WrenchRegion& /*region*/, const NormalizedGains& n) {
  plant.validate();
  const double g = plant.contact_stiffness * plant.admittance;
  PidGains gains;
  gains.kp(2) = n.p / g;
  gains.ki(2) = n.i / (g * plant.dt);
  gains.kd(2) = n.d * plant.dt / g;
  gains.beta = n.beta;
  gains.integral_clamp = Vec6::Constant(n.integral_clamp);
  return gains;
}

}  // namespace surfkit::control
