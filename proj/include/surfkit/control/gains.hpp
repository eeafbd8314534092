#pragma once

#include "surfkit/control/pid.hpp"
#include "surfkit/control/plant.hpp"
#include "surfkit/control/wrench.hpp"

namespace surfkit::control {

/// Plant-normalized loop gains on tool z (per unit of k_c * admittance).
struct NormalizedGains {
  double p = 0.3;
  double i = 0.3;
  double d = 0.05;
  double beta = 0.9;
  double integral_clamp = 1.0;  // N s
};

/// Kp = p / G, Ki = i / (G dt), Kd = d dt / G with G = k_c * admittance,
/// on the z-force axis only; the other axes stay position controlled.
PidGains tune_gains_default(const PlantConfig& plant, const WrenchRegion& region,
                            const NormalizedGains& normalized = {});

}  // namespace surfkit::control
