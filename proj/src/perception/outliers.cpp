#include "surfkit/perception/outliers.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/spatial_index.hpp"

#include <cmath>

namespace surfkit::perception {

SorResult statistical_outlier_removal(const geom::PointCloud& cloud, std::size_t k, double multiplier) {
  if (k < 1) throw Error(Errc::InvalidParameter, "SOR needs k >= 1");
  if (cloud.size() <= k) throw Error(Errc::InsufficientPoints, "SOR needs more than k points");

  const geom::SpatialIndex index(cloud);
  SorResult out;
  out.mean_distance.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto nn = index.knn(cloud.points[i], k + 1);
    std::size_t dropped = nn.size();
    for (std::size_t j = 0; j < nn.size(); ++j) {
      if (nn[j].id == i) {
        dropped = j;
        break;
      }
    }
    if (dropped == nn.size()) dropped = nn.size() - 1;
    double sum = 0.0;
    for (std::size_t j = 0; j < nn.size(); ++j) {
      if (j != dropped) sum += nn[j].distance;
    }
    out.mean_distance[i] = sum / static_cast<double>(k);
  }

  const auto n = static_cast<double>(cloud.size());
  double mean = 0.0;
  for (double d : out.mean_distance) mean += d;
  mean /= n;
  double var = 0.0;
  for (double d : out.mean_distance) var += (d - mean) * (d - mean);
  var /= n - 1.0;
  out.threshold = mean + multiplier * std::sqrt(var);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    (out.mean_distance[i] > out.threshold ? out.outliers : out.inliers).push_back(i);
  }
  return out;
}

}  // namespace surfkit::perception
