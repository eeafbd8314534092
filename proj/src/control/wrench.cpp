#include "surfkit/control/wrench.hpp"

#include "surfkit/error.hpp"

#include <cmath>

namespace surfkit::control {

WrenchRegion WrenchRegion::make(const Vec6& lo, const Vec6& hi) {
  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)) || lo(i) > hi(i))
      throw Error(Errc::InvalidParameter, "wrench region bounds must be finite with lo <= hi");
  }
  WrenchRegion r;
  r.lo = lo;
  r.hi = hi;
  return r;
}

WrenchRegion WrenchRegion::normal_force(double fz) {
  Vec6 w = Vec6::Zero();
  w(2) = fz;
  return point(w);
}

bool WrenchRegion::contains(const Vec6& w) const {
  return (w.array() >= lo.array()).all() && (w.array() <= hi.array()).all();
}

Vec6 wrench_region_error(const Vec6& measured, const WrenchRegion& region) {
  Vec6 e = Vec6::Zero();
  for (int i = 0; i < 6; ++i) {
    if (measured(i) < region.lo(i)) {
      e(i) = region.lo(i) - measured(i);
    } else if (measured(i) > region.hi(i)) {
      e(i) = region.hi(i) - measured(i);
    }
  }
  return e;
}

}  // namespace surfkit::control
