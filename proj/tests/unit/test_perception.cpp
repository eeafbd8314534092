#include "support.hpp"

#include "surfkit/error.hpp"
#include "surfkit/perception/defects.hpp"
#include "surfkit/perception/line_fit.hpp"
#include "surfkit/perception/outliers.hpp"
#include "surfkit/perception/serialization.hpp"
#include "surfkit/perception/synthetic_scan.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace surfkit;
using namespace surfkit::perception;

namespace {

std::vector<bool> brute_sor(const geom::PointCloud& c, std::size_t k, double mult) {
  const std::size_t n = c.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) all.emplace_back((c.points[i] - c.points[j]).norm(), j);
    }
    std::sort(all.begin(), all.end());
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += all[j].first;
    d[i] = s / static_cast<double>(k);
  }
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double limit = mean + mult * std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<bool> outlier(n);
  for (std::size_t i = 0; i < n; ++i) outlier[i] = d[i] > limit;
  return outlier;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

}  // namespace

TEST_SUITE("perception") {

TEST_CASE("SOR decisions equal brute-force recomputation") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    geom::PointCloud c = test::random_cloud(rng, 300 + 20 * trial, 0.1);
    for (int s = 0; s < 5; ++s) c.points.emplace_back(0.3 + 0.05 * s, 0.2, -0.3);
    const std::size_t k = 4 + trial % 10;
    const double mult = 1.0 + 0.1 * (trial % 7);
    const auto got = statistical_outlier_removal(c, k, mult);
    const auto want = brute_sor(c, k, mult);
    std::vector<bool> got_mask(c.size(), false);
    for (auto id : got.outliers) got_mask[id] = true;
    CHECK(got_mask == want);
    CHECK(got.inliers.size() + got.outliers.size() == c.size());
  }
}

TEST_CASE("SOR argument checks") {
  geom::PointCloud c;
  c.points = {geom::Point3::Zero(), geom::Point3::UnitX()};
  CHECK(code_of([&] { statistical_outlier_removal(c, 0, 1.0); }) == Errc::InvalidParameter);
  CHECK(code_of([&] { statistical_outlier_removal(c, 2, 1.0); }) == Errc::InsufficientPoints);
}

TEST_CASE("line parameter is the normalized chord position") {
  std::vector<geom::Point3> pts = {{0, 0, 1}, {0, 1, 5}, {0, 3, 2}, {0, 4, 0}};
  const auto t = line_parameters(pts);
  CHECK(t[0] == doctest::Approx(0.0));
  CHECK(t[1] == doctest::Approx(0.25));
  CHECK(t[2] == doctest::Approx(0.75));
  CHECK(t[3] == doctest::Approx(1.0));
}

TEST_CASE("robust line fit recovers a polynomial and drops a spike") {
  PerceptionConfig cfg;
  cfg.poly_degree = 2;
  std::vector<geom::Point3> pts;
  for (int i = 0; i <= 50; ++i) {
    const double t = i / 50.0;
    pts.emplace_back(0.0, t * 0.2, 0.01 + 0.002 * t - 0.003 * t * t);
  }
  pts[25].z() += 0.004;
  const LineFit fit = fit_line_robust(pts, cfg, 3);
  CHECK(fit.line_id == 3);
  CHECK(fit.coefficients[0] == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(fit.coefficients[1] == doctest::Approx(0.002).epsilon(1e-7));
  CHECK(fit.coefficients[2] == doctest::Approx(-0.003).epsilon(1e-7));
  CHECK_FALSE(fit.inliers[25]);
  CHECK(fit.residuals[25] == doctest::Approx(0.004).epsilon(1e-6));
  CHECK(std::abs(fit.residuals[10]) < 1e-12);
  CHECK(code_of([&] { fit_line_robust(std::span(pts).first(3), cfg); }) == Errc::InsufficientPoints);
}

TEST_CASE("residual classification") {
  CHECK(classify_residuals({-1e-3, -2e-4}, 3e-4) == DefectKind::Dent);
  CHECK(classify_residuals({1e-3, 5e-4}, 3e-4) == DefectKind::Bump);
  CHECK(classify_residuals({8e-4, -6e-4}, 3e-4) == DefectKind::Rough);
  // One side dominates by more than a factor of two.
  CHECK(classify_residuals({1e-3, -4e-4}, 3e-4) == DefectKind::Bump);
  CHECK(to_string(DefectKind::Rough) == "rough");
}

TEST_CASE("synthetic scan lies on the analytic surface") {
  SyntheticScanSpec spec;
  spec.kind = SurfaceKind::CylinderPatch;
  spec.size_s = 0.1;
  spec.size_y = 0.05;
  spec.spacing = 0.005;
  spec.cylinder_radius = 0.5;
  const auto scan = make_synthetic_scan(spec);
  REQUIRE(scan.cloud.line_index.has_value());
  for (const auto& p : scan.cloud.points) {
    const double r = std::hypot(p.x(), spec.cylinder_radius - p.z());
    CHECK(r == doctest::Approx(spec.cylinder_radius).epsilon(1e-12));
  }
  const geom::Vec3 n = surface_normal(spec, 0.0);
  CHECK(n.z() == doctest::Approx(1.0));
  const geom::Point3 q = surface_point(spec, 0.5 * std::numbers::pi / 4, 0.0);
  CHECK(q.z() == doctest::Approx(0.5 * (1 - std::cos(std::numbers::pi / 4))));
}

TEST_CASE("seeded dent and bump are found with the right sign") {
  SyntheticScanSpec spec;
  spec.kind = SurfaceKind::CylinderPatch;
  spec.size_s = 0.2;
  spec.size_y = 0.2;
  spec.spacing = 0.002;
  spec.noise_sigma = 2e-5;
  spec.spurious_points = 15;
  spec.seed = 4;
  spec.defects = {{0.04, 0.04, 0.012, -1e-3}, {-0.05, -0.03, 0.01, 8e-4}};
  const auto scan = make_synthetic_scan(spec);
  const auto report = detect_defects(scan.cloud, PerceptionConfig{});
  REQUIRE(report.regions.size() == 2);
  int dents = 0, bumps = 0;
  for (const auto& r : report.regions) {
    const bool near_dent = (r.centroid - scan.defects[0].center).norm() < 0.01;
    const bool near_bump = (r.centroid - scan.defects[1].center).norm() < 0.01;
    CHECK((near_dent || near_bump));
    if (near_dent) {
      CHECK(r.kind == DefectKind::Dent);
      CHECK(r.peak_deviation < -5e-4);
      ++dents;
    }
    if (near_bump) {
      CHECK(r.kind == DefectKind::Bump);
      CHECK(r.peak_deviation > 4e-4);
      ++bumps;
    }
    CHECK(r.area > 0.0);
  }
  CHECK(dents == 1);
  CHECK(bumps == 1);
  CHECK(report.counts.sor_removed >= 15);
  for (auto id : scan.spurious_ids) CHECK(std::find(report.sor_removed.begin(), report.sor_removed.end(), id) != report.sor_removed.end());
}

TEST_CASE("defect area approximates the disk above threshold") {
  // Gaussian of depth D and sigma r/2 exceeds threshold h inside radius
  // rho = sigma sqrt(2 ln(D/h)).
  SyntheticScanSpec spec;
  spec.size_s = 0.12;
  spec.size_y = 0.12;
  spec.spacing = 0.001;
  spec.defects = {{0.0, 0.0, 0.02, -1.5e-3}};
  const auto report = detect_defects(make_synthetic_scan(spec).cloud, PerceptionConfig{});
  REQUIRE(report.regions.size() == 1);
  const double sigma = 0.01;
  const double rho = sigma * std::sqrt(2.0 * std::log(1.5e-3 / 3e-4));
  CHECK(report.regions[0].area == doctest::Approx(std::numbers::pi * rho * rho).epsilon(0.25));
}

TEST_CASE("clean plane has no regions") {
  SyntheticScanSpec spec;
  spec.noise_sigma = 2e-5;
  spec.seed = 9;
  const auto report = detect_defects(make_synthetic_scan(spec).cloud, PerceptionConfig{});
  CHECK(report.regions.empty());
}

TEST_CASE("detection needs line ids") {
  geom::PointCloud c;
  for (int i = 0; i < 50; ++i) c.points.emplace_back(i * 0.001, 0, 0);
  CHECK(code_of([&] { detect_defects(c, PerceptionConfig{}); }) == Errc::MissingLineIndex);
}

TEST_CASE("config validation and json round trip") {
  PerceptionConfig cfg;
  cfg.sor_k = 0;
  CHECK(code_of([&] { cfg.validate(); }) == Errc::InvalidParameter);
  PerceptionConfig c2;
  c2.residual_threshold_abs = 5e-4;
  c2.order = StageOrder::RegressionFirst;
  const auto back = perception_config_from_json(to_json(c2));
  CHECK(back.residual_threshold_abs == 5e-4);
  CHECK(back.order == StageOrder::RegressionFirst);
  SyntheticScanSpec spec;
  spec.defects = {{0.01, 0.02, 0.005, 1e-3}};
  const auto spec_back = scan_spec_from_json(to_json(spec));
  CHECK(spec_back.defects.size() == 1);
  CHECK(spec_back.defects[0].depth == 1e-3);
}

}  // TEST_SUITE
