#pragma once

#include <Eigen/Core>

namespace surfkit::control {

/// (Fx, Fy, Fz [N], Tx, Ty, Tz [N m]) in the tool frame.
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Axis-aligned 6D box of admissible wrenches; lo == hi is a setpoint.
struct WrenchRegion {
  Vec6 lo = Vec6::Zero();
  Vec6 hi = Vec6::Zero();

  /// Throws InvalidParameter unless lo <= hi componentwise.
  static WrenchRegion make(const Vec6& lo, const Vec6& hi);
  static WrenchRegion point(const Vec6& w) { return make(w, w); }
  /// Point region pressing `fz` newtons along tool z, zero elsewhere.
  static WrenchRegion normal_force(double fz);

  bool contains(const Vec6& w) const;
  /// Midpoint of the z-force interval, the force setpoint for metrics.
  double fz_setpoint() const { return 0.5 * (lo(2) + hi(2)); }
};

/// Per axis: lo - w below the box, hi - w above it, 0 inside, so w + e is
/// the closest point of the box.
Vec6 wrench_region_error(const Vec6& measured, const WrenchRegion& region);

}  // namespace surfkit::control
