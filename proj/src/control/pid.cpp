#include "surfkit/control/pid.hpp"

#include "surfkit/error.hpp"

#include <algorithm>

namespace surfkit::control {

void PidGains::validate() const {
  if ((kp.array() < 0.0).any() || (ki.array() < 0.0).any() || (kd.array() < 0.0).any())
    throw Error(Errc::InvalidParameter, "PID gains must be >= 0");
  if (!(beta >= 0.0 && beta < 1.0)) throw Error(Errc::InvalidParameter, "derivative filter beta must be in [0, 1)");
  for (int i = 0; i < 6; ++i) {
    if (ki(i) > 0.0 && !(integral_clamp(i) > 0.0))
      throw Error(Errc::InvalidParameter, "integral clamp must be > 0 on axes with Ki > 0");
  }
}

Vec6 pid_step(PidState& state, const Vec6& error, double dt, const PidGains& gains) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidParameter, "PID time step must be > 0");
  state.integral += error * dt;
  for (int i = 0; i < 6; ++i) {
    const double c = gains.integral_clamp(i);
    if (c > 0.0) state.integral(i) = std::clamp(state.integral(i), -c, c);
  }
  const Vec6 raw = state.initialized ? Vec6((error - state.previous_error) / dt) : Vec6::Zero();
  state.filtered_derivative = gains.beta * state.filtered_derivative + (1.0 - gains.beta) * raw;
  state.previous_error = error;
  state.initialized = true;
  return gains.kp.cwiseProduct(error) + gains.ki.cwiseProduct(state.integral) +
         gains.kd.cwiseProduct(state.filtered_derivative);
}

}  // namespace surfkit::control
