#pragma once

#include <cstddef>

namespace surfkit::perception {

enum class StageOrder { SorFirst, RegressionFirst };

struct PerceptionConfig {
  int poly_degree = 1;
  double residual_threshold_abs = 3e-4;  // m
  int robust_iterations = 3;
  std::size_t sor_k = 16;
  double sor_multiplier = 2.0;
  double cluster_radius = 5e-3;  // m
  std::size_t cluster_min_points = 10;
  StageOrder order = StageOrder::SorFirst;

  /// Throws InvalidParameter.
  void validate() const;
};

}  // namespace surfkit::perception
