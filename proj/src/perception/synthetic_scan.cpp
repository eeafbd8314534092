#include "surfkit/perception/synthetic_scan.hpp"

#include "surfkit/error.hpp"
#include "surfkit/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace surfkit::perception {
namespace {

std::size_t count_for(double size, double spacing) {
  return static_cast<std::size_t>(std::floor(size / spacing + 0.5)) + 1;
}

double defect_offset(const SyntheticScanSpec& spec, double s, double y) {
  double off = 0.0;
  for (const auto& d : spec.defects) {
    const double sigma = d.radius / 2.0;
    const double r2 = (s - d.center_s) * (s - d.center_s) + (y - d.center_y) * (y - d.center_y);
    off += d.depth * std::exp(-r2 / (2.0 * sigma * sigma));
  }
  return off;
}

}  // namespace

void SyntheticScanSpec::validate() const {
  if (!(spacing > 0.0)) throw Error(Errc::InvalidParameter, "spacing must be > 0");
  if (!(size_s >= 0.0) || !(size_y >= 0.0)) throw Error(Errc::InvalidParameter, "sizes must be >= 0");
  if (!(noise_sigma >= 0.0)) throw Error(Errc::InvalidParameter, "noise sigma must be >= 0");
  if (kind == SurfaceKind::CylinderPatch) {
    if (!(cylinder_radius > 0.0)) throw Error(Errc::InvalidParameter, "cylinder radius must be > 0");
    if (size_s / 2.0 >= cylinder_radius * std::numbers::pi / 2.0)
      throw Error(Errc::InvalidParameter, "patch wraps past a quarter turn");
  }
  for (const auto& d : defects) {
    if (!(d.radius > spacing)) throw Error(Errc::InvalidParameter, "defect radius must exceed the spacing");
  }
}

geom::Point3 surface_point(const SyntheticScanSpec& spec, double s, double y) {
  if (spec.kind == SurfaceKind::Plane) return {s, y, 0.0};
  const double r = spec.cylinder_radius;
  const double th = s / r;
  return {r * std::sin(th), y, r * (1.0 - std::cos(th))};
}

geom::Vec3 surface_normal(const SyntheticScanSpec& spec, double s) {
  if (spec.kind == SurfaceKind::Plane) return geom::Vec3::UnitZ();
  const double th = s / spec.cylinder_radius;
  return {-std::sin(th), 0.0, std::cos(th)};
}

SyntheticScan make_synthetic_scan(const SyntheticScanSpec& spec) {
  spec.validate();
  NormalSampler rng(spec.seed);

  const std::size_t ns = count_for(spec.size_s, spec.spacing);
  const std::size_t ny = count_for(spec.size_y, spec.spacing);
  const double s0 = -static_cast<double>(ns - 1) / 2.0 * spec.spacing;
  const double y0 = -static_cast<double>(ny - 1) / 2.0 * spec.spacing;

  // Spurious returns: (line, y, height above surface), drawn up front.
  struct Spurious {
    std::size_t line;
    double y;
    double height;
  };
  std::vector<Spurious> spurious;
  for (std::size_t k = 0; k < spec.spurious_points; ++k) {
    const auto line = static_cast<std::size_t>(rng.bits() % ns);
    const double y = rng.uniform(y0, -y0);
    spurious.push_back({line, y, rng.uniform(3e-3, 15e-3)});
  }
  std::stable_sort(spurious.begin(), spurious.end(), [](const Spurious& a, const Spurious& b) {
    return a.line < b.line || (a.line == b.line && a.y < b.y);
  });

  SyntheticScan out;
  auto& cloud = out.cloud;
  cloud.meta.source_id = "synthetic";
  cloud.points.reserve(ns * ny + spurious.size());
  std::vector<int> lines;
  lines.reserve(ns * ny + spurious.size());
  auto next_spurious = spurious.begin();

  for (std::size_t i = 0; i < ns; ++i) {
    const double s = s0 + static_cast<double>(i) * spec.spacing;
    const geom::Vec3 normal = surface_normal(spec, s);
    for (std::size_t j = 0; j <= ny; ++j) {
      const double y = j < ny ? y0 + static_cast<double>(j) * spec.spacing : 1e300;
      while (next_spurious != spurious.end() && next_spurious->line == i && next_spurious->y <= y) {
        out.spurious_ids.push_back(cloud.points.size());
        cloud.points.push_back(surface_point(spec, s, next_spurious->y) + next_spurious->height * normal);
        lines.push_back(static_cast<int>(i));
        ++next_spurious;
      }
      if (j == ny) break;
      geom::Point3 p = surface_point(spec, s, y) + defect_offset(spec, s, y) * normal;
      if (spec.noise_sigma > 0.0) p.z() += spec.noise_sigma * rng();
      cloud.points.push_back(p);
      lines.push_back(static_cast<int>(i));
    }
  }
  cloud.line_index = std::move(lines);

  for (const auto& d : spec.defects) out.defects.push_back({d, surface_point(spec, d.center_s, d.center_y)});
  return out;
}

}  // namespace surfkit::perception
