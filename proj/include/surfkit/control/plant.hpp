#pragma once

#include "surfkit/control/surface_model.hpp"
#include "surfkit/control/wrench.hpp"
#include "surfkit/geometry/types.hpp"

namespace surfkit::control {

struct Vibration {
  double amplitude = 0.0;  // m, along the surface frame normal
  double frequency = 0.0;  // Hz

  double offset(double t) const;
};

struct PlantConfig {
  double contact_stiffness = 2e4;  // N/m
  double contact_damping = 50.0;   // N s/m
  double admittance = 2e-5;        // m/N
  double force_limit = 100.0;      // N, per translational axis
  Vibration vibration;
  double dt = 0.002;               // s
  double noise_sigma = 0.05;       // N
  double feed = 0.05;              // m/s along the path

  /// Throws InvalidParameter.
  void validate() const;
};

struct ContactState {
  Vec6 wrench = Vec6::Zero();  // noise free
  double penetration = 0.0;    // m
  bool outside = false;        // no surface under the tool
};

/// k_c delta + c_d max(0, delta_rate) along tool z, zero without contact.
Vec6 contact_wrench(double penetration, double penetration_rate, const PlantConfig& plant);

/// Penetration of the tool point below the (vibrating) surface, measured
/// along the surface frame normal. Outside the height field the flag is
/// set and the force is zero.
ContactState contact_force(const geom::Point3& tool, const HeightField& surface, double surface_offset,
                           const PlantConfig& plant, double previous_penetration);

}  // namespace surfkit::control
