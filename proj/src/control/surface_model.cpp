#include "surfkit/control/surface_model.hpp"

#include "surfkit/error.hpp"

#include <cmath>
#include <limits>

namespace surfkit::control {

HeightField::HeightField(const geom::PointCloud& cloud, const geom::SurfaceFrame& frame, double cell)
    : frame_(frame), cell_(cell) {
  if (!(cell > 0.0)) throw Error(Errc::InvalidParameter, "height field cell must be > 0");
  if (cloud.empty()) throw Error(Errc::EmptyCloud, "height field needs points");

  double umin = std::numeric_limits<double>::infinity(), vmin = umin;
  double umax = -umin, vmax = -umin;
  std::vector<geom::Vec3> local(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    local[i] = frame.to_local(cloud.points[i]);
    umin = std::min(umin, local[i].x());
    umax = std::max(umax, local[i].x());
    vmin = std::min(vmin, local[i].y());
    vmax = std::max(vmax, local[i].y());
  }
  u0_ = umin;
  v0_ = vmin;
  nu_ = static_cast<long long>(std::floor((umax - umin) / cell)) + 1;
  nv_ = static_cast<long long>(std::floor((vmax - vmin) / cell)) + 1;
  const auto total = static_cast<std::size_t>(nu_ * nv_);
  std::vector<double> sum(total, 0.0);
  std::vector<std::size_t> count(total, 0);
  for (const auto& l : local) {
    const auto iu = std::min(nu_ - 1, static_cast<long long>(std::floor((l.x() - u0_) / cell)));
    const auto iv = std::min(nv_ - 1, static_cast<long long>(std::floor((l.y() - v0_) / cell)));
    const auto k = static_cast<std::size_t>(iu * nv_ + iv);
    sum[k] += l.z();
    ++count[k];
  }
  mean_.assign(total, 0.0);
  occupied_.assign(total, 0);
  for (std::size_t k = 0; k < total; ++k) {
    if (count[k] == 0) continue;
    mean_[k] = sum[k] / static_cast<double>(count[k]);
    occupied_[k] = 1;
  }
}

std::optional<double> HeightField::height(double u, double v) const {
  if (mean_.empty()) return std::nullopt;
  // Cell centers sit at u0 + (i + 0.5) cell.
  const double fu = (u - u0_) / cell_ - 0.5;
  const double fv = (v - v0_) / cell_ - 0.5;
  if (fu < -1.0 || fv < -1.0 || fu > static_cast<double>(nu_) || fv > static_cast<double>(nv_)) return std::nullopt;
  const auto iu = static_cast<long long>(std::floor(fu));
  const auto iv = static_cast<long long>(std::floor(fv));
  const double tu = fu - static_cast<double>(iu);
  const double tv = fv - static_cast<double>(iv);

  double acc = 0.0, wsum = 0.0;
  for (int du = 0; du < 2; ++du) {
    for (int dv = 0; dv < 2; ++dv) {
      const long long a = iu + du, b = iv + dv;
      if (a < 0 || b < 0 || a >= nu_ || b >= nv_) continue;
      const auto k = static_cast<std::size_t>(a * nv_ + b);
      if (!occupied_[k]) continue;
      const double w = (du ? tu : 1.0 - tu) * (dv ? tv : 1.0 - tv);
      acc += w * mean_[k];
      wsum += w;
    }
  }
  if (wsum <= 1e-12) return std::nullopt;
  return acc / wsum;
}

std::optional<double> HeightField::height_at(const geom::Point3& world) const {
  const geom::Vec3 l = frame_.to_local(world);
  return height(l.x(), l.y());
}

}  // namespace surfkit::control
