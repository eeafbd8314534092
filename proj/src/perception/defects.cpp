#include "surfkit/perception/defects.hpp"

#include "surfkit/error.hpp"
#include "surfkit/geometry/spatial_index.hpp"
#include "surfkit/perception/line_fit.hpp"
#include "surfkit/perception/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace surfkit::perception {
namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double mean_spacing(const geom::PointCloud& cloud) {
  if (cloud.size() < 2) return 0.0;
  const geom::SpatialIndex index(cloud);
  const std::size_t stride = std::max<std::size_t>(1, cloud.size() / 2000);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < cloud.size(); i += stride) {
    const auto nn = index.knn(cloud.points[i], 2);
    sum += nn[0].id == i ? nn[1].distance : nn[0].distance;
    ++n;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

std::string_view to_string(DefectKind kind) {
  switch (kind) {
    case DefectKind::Dent: return "dent";
    case DefectKind::Bump: return "bump";
    case DefectKind::Rough: return "rough";
  }
  return "dent";
}

DefectKind classify_residuals(const std::vector<double>& residuals, double threshold) {
  double pos = 0.0, neg = 0.0;
  for (double r : residuals) {
    pos = std::max(pos, r);
    neg = std::max(neg, -r);
  }
  if (pos > threshold && neg > threshold && std::max(pos, neg) / std::min(pos, neg) < 2.0) return DefectKind::Rough;
  return pos > neg ? DefectKind::Bump : DefectKind::Dent;
}

DefectReport detect_defects(const geom::PointCloud& cloud, const PerceptionConfig& cfg) {
  cfg.validate();
  if (!cloud.line_index) throw Error(Errc::MissingLineIndex, "defect detection needs scan-line ids");

  DefectReport report;
  report.config = cfg;
  report.candidate_mask.assign(cloud.size(), false);
  std::vector<double> residual(cloud.size(), 0.0);

  const SorResult sor = statistical_outlier_removal(cloud, cfg.sor_k, cfg.sor_multiplier);
  report.sor_removed = sor.outliers;
  const geom::PointCloud working = geom::select(cloud, sor.inliers);

  if (cfg.order == StageOrder::SorFirst) {
    const auto reg = regression_candidates(working, cfg);
    for (std::size_t j = 0; j < sor.inliers.size(); ++j) {
      report.candidate_mask[sor.inliers[j]] = reg.candidate[j];
      residual[sor.inliers[j]] = reg.residual[j];
    }
    report.skipped_lines = reg.skipped_lines;
  } else {
    const auto reg = regression_candidates(cloud, cfg);
    report.candidate_mask = reg.candidate;
    residual = reg.residual;
    for (std::size_t id : sor.outliers) report.candidate_mask[id] = false;
    report.skipped_lines = reg.skipped_lines;
  }

  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (report.candidate_mask[i]) cand.push_back(i);
  }
  report.counts.points = cloud.size();
  report.counts.candidates = cand.size();
  report.counts.sor_removed = report.sor_removed.size();
  if (cand.empty()) return report;

  std::vector<geom::Point3> cand_pts;
  cand_pts.reserve(cand.size());
  for (std::size_t id : cand) cand_pts.push_back(cloud.points[id]);
  const geom::SpatialIndex cand_index(cand_pts);
  DisjointSet sets(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (const auto& nb : cand_index.radius(cand_pts[i], cfg.cluster_radius)) sets.unite(i, nb.id);
  }
  std::map<std::size_t, std::vector<std::size_t>> clusters;  // keyed by smallest member
  for (std::size_t i = 0; i < cand.size(); ++i) clusters[sets.find(i)].push_back(i);

  const double spacing = mean_spacing(working);
  for (const auto& [root, members] : clusters) {
    if (members.size() < cfg.cluster_min_points) continue;
    DefectRegion region;
    std::vector<double> res;
    geom::Point3 lo = cand_pts[members.front()], hi = lo;
    geom::Vec3 sum = geom::Vec3::Zero();
    for (std::size_t m : members) {
      const std::size_t id = cand[m];
      region.point_ids.push_back(id);
      res.push_back(residual[id]);
      sum += cloud.points[id];
      lo = lo.cwiseMin(cloud.points[id]);
      hi = hi.cwiseMax(cloud.points[id]);
      if (std::abs(residual[id]) > std::abs(region.peak_deviation)) region.peak_deviation = residual[id];
    }
    region.centroid = sum / static_cast<double>(members.size());
    region.bounds = geom::Aabb::make(lo, hi);
    region.area = static_cast<double>(members.size()) * spacing * spacing;
    region.kind = classify_residuals(res, cfg.residual_threshold_abs);
    switch (region.kind) {
      case DefectKind::Dent: ++report.counts.dents; break;
      case DefectKind::Bump: ++report.counts.bumps; break;
      case DefectKind::Rough: ++report.counts.rough; break;
    }
    report.regions.push_back(std::move(region));
  }
  report.counts.regions = report.regions.size();
  return report;
}

}  // namespace surfkit::perception
