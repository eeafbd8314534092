#include "surfkit/perception/line_fit.hpp"

#include "surfkit/error.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>

namespace surfkit::perception {
namespace {

std::vector<double> solve_poly(std::span<const double> t, std::span<const geom::Point3> pts,
                               const std::vector<bool>& use, int degree) {
  std::size_t m = 0;
  for (bool u : use) m += u ? 1 : 0;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), degree + 1);
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!use[i]) continue;
    double power = 1.0;
    for (int c = 0; c <= degree; ++c) {
      a(row, c) = power;
      power *= t[i];
    }
    b(row) = pts[i].z();
    ++row;
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  return {x.data(), x.data() + x.size()};
}

double eval_poly(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

}  // namespace

void PerceptionConfig::validate() const {
  if (poly_degree < 0 || poly_degree > 3) throw Error(Errc::InvalidParameter, "poly_degree must be in [0, 3]");
  if (!(residual_threshold_abs > 0.0)) throw Error(Errc::InvalidParameter, "residual_threshold_abs must be > 0");
  if (robust_iterations < 1) throw Error(Errc::InvalidParameter, "robust_iterations must be >= 1");
  if (sor_k < 3) throw Error(Errc::InvalidParameter, "sor_k must be >= 3");
  if (!(sor_multiplier > 0.0)) throw Error(Errc::InvalidParameter, "sor_multiplier must be > 0");
  if (!(cluster_radius > 0.0)) throw Error(Errc::InvalidParameter, "cluster_radius must be > 0");
  if (cluster_min_points < 1) throw Error(Errc::InvalidParameter, "cluster_min_points must be >= 1");
}

double LineFit::evaluate(double t) const { return eval_poly(coefficients, t); }

std::vector<double> line_parameters(std::span<const geom::Point3> points) {
  std::vector<double> t(points.size(), 0.0);
  if (points.size() < 2) return t;
  Eigen::Vector2d dir = (points.back() - points.front()).head<2>();
  const double len = dir.norm();
  if (len <= 0.0) {
    // Closed or vertical line: fall back to the sample index.
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / static_cast<double>(t.size() - 1);
    return t;
  }
  dir /= len;
  for (std::size_t i = 0; i < points.size(); ++i) t[i] = (points[i] - points.front()).head<2>().dot(dir) / len;
  return t;
}

LineFit fit_line_robust(std::span<const geom::Point3> points, const PerceptionConfig& cfg, int line_id) {
  const auto need = static_cast<std::size_t>(cfg.poly_degree + 2);
  if (points.size() < need)
    throw Error(Errc::InsufficientPoints,
                "line " + std::to_string(line_id) + " has " + std::to_string(points.size()) + " points, needs " +
                    std::to_string(need));

  const auto t = line_parameters(points);
  LineFit fit;
  fit.line_id = line_id;
  fit.inliers.assign(points.size(), true);
  fit.coefficients = solve_poly(t, points, fit.inliers, cfg.poly_degree);

  for (int iter = 0; iter < cfg.robust_iterations; ++iter) {
    std::vector<bool> next(points.size());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      next[i] = std::abs(points[i].z() - eval_poly(fit.coefficients, t[i])) <= cfg.residual_threshold_abs;
      kept += next[i] ? 1 : 0;
    }
    if (next == fit.inliers || kept < static_cast<std::size_t>(cfg.poly_degree + 1)) break;
    fit.inliers = std::move(next);
    fit.coefficients = solve_poly(t, points, fit.inliers, cfg.poly_degree);
  }

  fit.residuals.resize(points.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    fit.residuals[i] = points[i].z() - eval_poly(fit.coefficients, t[i]);
    ss += fit.residuals[i] * fit.residuals[i];
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

RegressionCandidates regression_candidates(const geom::PointCloud& cloud, const PerceptionConfig& cfg) {
  if (!cloud.line_index) throw Error(Errc::MissingLineIndex, "regression candidates need scan-line ids");
  const auto& lines = *cloud.line_index;
  RegressionCandidates out;
  out.candidate.assign(cloud.size(), false);
  out.residual.assign(cloud.size(), 0.0);

  std::size_t begin = 0;
  while (begin < cloud.size()) {
    std::size_t end = begin + 1;
    while (end < cloud.size() && lines[end] == lines[begin]) ++end;
    const std::span<const geom::Point3> pts(cloud.points.data() + begin, end - begin);
    if (pts.size() < static_cast<std::size_t>(cfg.poly_degree + 2)) {
      out.skipped_lines.push_back(lines[begin]);
    } else {
      const auto fit = fit_line_robust(pts, cfg, lines[begin]);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        out.residual[begin + i] = fit.residuals[i];
        out.candidate[begin + i] = std::abs(fit.residuals[i]) > cfg.residual_threshold_abs;
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace surfkit::perception
