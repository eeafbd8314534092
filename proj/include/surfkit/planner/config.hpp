#pragma once

#include "surfkit/geometry/types.hpp"

#include <cstddef>
#include <optional>

namespace surfkit::planner {

enum class Interpolation { Linear, CatmullRom };

struct PlannerConfig {
  double stepover = 0.02;                 // m, spacing of slicing planes
  std::optional<double> band_halfwidth;   // m; unset = 1.5 x median spacing
  double waypoint_spacing = 0.005;        // m
  int smoothing_window = 5;               // odd
  double angle_of_attack_deg = 2.0;
  std::size_t normal_k = 16;
  double clearance = 0.05;                // m
  Interpolation interpolation = Interpolation::Linear;
  std::size_t lowpass_k = 0;              // 0 = no cloud low-pass before planning

  /// Throws InvalidParameter.
  void validate() const;
};

/// The configured band, or 1.5 x the median nearest-neighbor spacing.
double resolve_band_halfwidth(const PlannerConfig& cfg, const geom::PointCloud& cloud);

}  // namespace surfkit::planner
