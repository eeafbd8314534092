#pragma once

#include "surfkit/control/wrench.hpp"

namespace surfkit::control {

struct PidGains {
  Vec6 kp = Vec6::Zero();
  Vec6 ki = Vec6::Zero();
  Vec6 kd = Vec6::Zero();
  double beta = 0.9;  // derivative low-pass
  Vec6 integral_clamp = Vec6::Constant(1.0);

  /// Throws InvalidParameter.
  void validate() const;
};

struct PidState {
  Vec6 integral = Vec6::Zero();
  Vec6 previous_error = Vec6::Zero();
  Vec6 filtered_derivative = Vec6::Zero();
  bool initialized = false;

  void reset() { *this = PidState{}; }
};

/// One discrete step: rectangle-rule integral with per-axis clamp,
/// backward-difference derivative (zero on the first call) through a
/// first-order low-pass. Returns u = Kp e + Ki I + Kd D and advances
/// `state`. Throws InvalidParameter for dt <= 0.
Vec6 pid_step(PidState& state, const Vec6& error, double dt, const PidGains& gains);

}  // namespace surfkit::control
