#pragma once

#include "surfkit/geometry/types.hpp"

#include <optional>
#include <vector>

namespace surfkit::control {

/// Height along frame.n over a regular (u, v) raster of cell means.
class HeightField {
 public:
  HeightField() = default;
  /// Throws InvalidParameter for cell <= 0, EmptyCloud for an empty cloud.
  HeightField(const geom::PointCloud& cloud, const geom::SurfaceFrame& frame, double cell);

  /// Bilinear over the four surrounding cell centers; missing corners are
  /// dropped and the rest renormalized. nullopt when none is occupied.
  std::optional<double> height(double u, double v) const;
  std::optional<double> height_at(const geom::Point3& world) const;

  const geom::SurfaceFrame& frame() const { return frame_; }
  double cell() const { return cell_; }

 private:
  geom::SurfaceFrame frame_;
  double cell_ = 0.0;
  double u0_ = 0.0, v0_ = 0.0;
  long long nu_ = 0, nv_ = 0;
  std::vector<double> mean_;
  std::vector<unsigned char> occupied_;
};

}  // namespace surfkit::control
