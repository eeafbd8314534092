#pragma once

#include "surfkit/geometry/types.hpp"

#include <cstddef>
#include <vector>

namespace surfkit::perception {

struct SorResult {
  std::vector<std::size_t> inliers;
  std::vector<std::size_t> outliers;
  std::vector<double> mean_distance;  // d_i per point
  double threshold = 0.0;
};

/// d_i = mean distance from point i to its k nearest other points. A point
/// is an outlier iff d_i > mean(d) + multiplier * stddev(d), with the sample
/// standard deviation. Throws InsufficientPoints unless size() > k.
SorResult statistical_outlier_removal(const geom::PointCloud& cloud, std::size_t k, double multiplier);

}  // namespace surfkit::perception
