#pragma once

#include "surfkit/geometry/types.hpp"
#include "surfkit/perception/config.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace surfkit::perception {

enum class DefectKind { Dent, Bump, Rough };

std::string_view to_string(DefectKind kind);

struct DefectRegion {
  std::vector<std::size_t> point_ids;  // ids into the input cloud
  geom::Point3 centroid = geom::Point3::Zero();
  geom::Aabb bounds{geom::Point3::Zero(), geom::Point3::Zero()};
  double peak_deviation = 0.0;  // m, + above the fitted surface
  double area = 0.0;            // m^2
  DefectKind kind = DefectKind::Dent;
};

struct DefectCounts {
  std::size_t points = 0;
  std::size_t candidates = 0;
  std::size_t sor_removed = 0;
  std::size_t regions = 0;
  std::size_t dents = 0;
  std::size_t bumps = 0;
  std::size_t rough = 0;
};

struct DefectReport {
  std::vector<DefectRegion> regions;
  std::vector<bool> candidate_mask;  // over the input cloud
  std::vector<std::size_t> sor_removed;
  std::vector<int> skipped_lines;
  PerceptionConfig config;
  DefectCounts counts;
};

/// Rough when both signs exceed the threshold and neither peak dominates
/// the other by a factor of 2; otherwise the sign of the larger peak.
DefectKind classify_residuals(const std::vector<double>& residuals, double threshold);

/// Outlier removal, per-line regression candidates, radius-graph
/// clustering and region typing. The stage order follows cfg.order.
DefectReport detect_defects(const geom::PointCloud& cloud, const PerceptionConfig& cfg);

}  // namespace surfkit::perception
