#pragma once

#include "surfkit/geometry/types.hpp"
#include "surfkit/perception/config.hpp"

#include <span>
#include <vector>

namespace surfkit::perception {

/// Polynomial z(t) fitted to one scan line. `t` is the normalized position
/// along the line's horizontal chord (0 at the first point, 1 at the last).
struct LineFit {
  int line_id = 0;
  std::vector<double> coefficients;  // ascending powers of t
  std::vector<double> residuals;     // z - z(t), one per point
  std::vector<bool> inliers;         // points used in the final fit
  double rms_residual = 0.0;

  double evaluate(double t) const;
};

/// Chord parameter of every point (see LineFit).
std::vector<double> line_parameters(std::span<const geom::Point3> points);

/// Least squares, then refits without points whose |residual| exceeds the
/// threshold, up to robust_iterations times or until the inlier set stops
/// changing. Residuals are reported for every point against the final fit.
///
/// Throws InsufficientPoints when the line has fewer than degree + 2 points.
LineFit fit_line_robust(std::span<const geom::Point3> points, const PerceptionConfig& cfg, int line_id = 0);

struct RegressionCandidates {
  std::vector<bool> candidate;   // |residual| > threshold
  std::vector<double> residual;  // signed, 0 for skipped lines
  std::vector<int> skipped_lines;
};

/// Per-line robust fit over a cloud with scan-line ids. Lines too short to
/// fit are skipped and listed. Throws MissingLineIndex.
RegressionCandidates regression_candidates(const geom::PointCloud& cloud, const PerceptionConfig& cfg);

}  // namespace surfkit::perception
