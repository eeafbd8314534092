#include "surfkit/perception/serialization.hpp"

#include "surfkit/error.hpp"

namespace surfkit::perception {
namespace {

using nlohmann::json;

json point(const geom::Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidParameter, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const PerceptionConfig& cfg) {
  return {{"poly_degree", cfg.poly_degree},
          {"residual_threshold_abs", cfg.residual_threshold_abs},
          {"robust_iterations", cfg.robust_iterations},
          {"sor_k", cfg.sor_k},
          {"sor_multiplier", cfg.sor_multiplier},
          {"cluster_radius", cfg.cluster_radius},
          {"cluster_min_points", cfg.cluster_min_points},
          {"order", cfg.order == StageOrder::SorFirst ? "sor_first" : "regression_first"}};
}

PerceptionConfig perception_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidParameter, "perception config must be an object");
  PerceptionConfig cfg;
  read(j, "poly_degree", cfg.poly_degree);
  read(j, "residual_threshold_abs", cfg.residual_threshold_abs);
  read(j, "robust_iterations", cfg.robust_iterations);
  read(j, "sor_k", cfg.sor_k);
  read(j, "sor_multiplier", cfg.sor_multiplier);
  read(j, "cluster_radius", cfg.cluster_radius);
  read(j, "cluster_min_points", cfg.cluster_min_points);
  std::string order = "sor_first";
  read(j, "order", order);
  if (order == "sor_first") {
    cfg.order = StageOrder::SorFirst;
  } else if (order == "regression_first") {
    cfg.order = StageOrder::RegressionFirst;
  } else {
    throw Error(Errc::InvalidParameter, "unknown stage order '" + order + "'");
  }
  cfg.validate();
  return cfg;
}

json to_json(const DefectReport& report) {
  json regions = json::array();
  for (const auto& r : report.regions) {
    regions.push_back({{"kind", to_string(r.kind)},
                       {"point_ids", r.point_ids},
                       {"centroid_m", point(r.centroid)},
                       {"bbox_min_m", point(r.bounds.min)},
                       {"bbox_max_m", point(r.bounds.max)},
                       {"peak_deviation_m", r.peak_deviation},
                       {"area_m2", r.area}});
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < report.candidate_mask.size(); ++i) {
    if (report.candidate_mask[i]) candidates.push_back(i);
  }
  const auto& c = report.counts;
  return {{"regions", std::move(regions)},
          {"sor_removed", report.sor_removed},
          {"candidates", std::move(candidates)},
          {"skipped_lines", report.skipped_lines},
          {"config", to_json(report.config)},
          {"counts",
           {{"points", c.points},
            {"candidates", c.candidates},
            {"sor_removed", c.sor_removed},
            {"regions", c.regions},
            {"dent", c.dents},
            {"bump", c.bumps},
            {"rough", c.rough}}}};
}

json to_json(const SyntheticScanSpec& spec) {
  json defects = json::array();
  for (const auto& d : spec.defects) {
    defects.push_back({{"center_s", d.center_s}, {"center_y", d.center_y}, {"radius", d.radius}, {"depth", d.depth}});
  }
  return {{"kind", spec.kind == SurfaceKind::Plane ? "plane" : "cylinder"},
          {"size_s", spec.size_s},
          {"size_y", spec.size_y},
          {"spacing", spec.spacing},
          {"cylinder_radius", spec.cylinder_radius},
          {"noise_sigma", spec.noise_sigma},
          {"defects", std::move(defects)},
          {"spurious_points", spec.spurious_points},
          {"seed", spec.seed}};
}

SyntheticScanSpec scan_spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidParameter, "scan spec must be an object");
  SyntheticScanSpec spec;
  std::string kind = "plane";
  read(j, "kind", kind);
  if (kind == "plane") {
    spec.kind = SurfaceKind::Plane;
  } else if (kind == "cylinder" || kind == "cylinder-patch") {
    spec.kind = SurfaceKind::CylinderPatch;
  } else {
    throw Error(Errc::InvalidParameter, "unknown surface kind '" + kind + "'");
  }
  read(j, "size_s", spec.size_s);
  read(j, "size_y", spec.size_y);
  read(j, "spacing", spec.spacing);
  read(j, "cylinder_radius", spec.cylinder_radius);
  read(j, "noise_sigma", spec.noise_sigma);
  read(j, "spurious_points", spec.spurious_points);
  read(j, "seed", spec.seed);
  if (j.contains("defects")) {
    if (!j["defects"].is_array()) throw Error(Errc::InvalidParameter, "defects must be an array");
    for (const auto& d : j["defects"]) {
      SeededDefect sd;
      read(d, "center_s", sd.center_s);
      read(d, "center_y", sd.center_y);
      read(d, "radius", sd.radius);
      read(d, "depth", sd.depth);
      spec.defects.push_back(sd);
    }
  }
  spec.validate();
  return spec;
}

}  // namespace surfkit::perception
