#include "surfkit/planner/serialization.hpp"

#include "surfkit/error.hpp"

namespace surfkit::planner {
namespace {

using nlohmann::json;

json vec(const geom::Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

geom::Vec3 read_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(Errc::ParseError, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

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

json to_json(const PlannerConfig& cfg) {
  json j = {{"stepover", cfg.stepover},
            {"waypoint_spacing", cfg.waypoint_spacing},
            {"smoothing_window", cfg.smoothing_window},
            {"angle_of_attack_deg", cfg.angle_of_attack_deg},
            {"normal_k", cfg.normal_k},
            {"clearance", cfg.clearance},
            {"interpolation", cfg.interpolation == Interpolation::Linear ? "linear" : "catmull_rom"},
            {"lowpass_k", cfg.lowpass_k}};
  j["band_halfwidth"] = cfg.band_halfwidth ? json(*cfg.band_halfwidth) : json(nullptr);
  return j;
}

PlannerConfig planner_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidParameter, "planner config must be an object");
  PlannerConfig cfg;
  read(j, "stepover", cfg.stepover);
  read(j, "waypoint_spacing", cfg.waypoint_spacing);
  read(j, "smoothing_window", cfg.smoothing_window);
  read(j, "angle_of_attack_deg", cfg.angle_of_attack_deg);
  read(j, "normal_k", cfg.normal_k);
  read(j, "clearance", cfg.clearance);
  read(j, "lowpass_k", cfg.lowpass_k);
  if (j.contains("band_halfwidth") && !j["band_halfwidth"].is_null()) {
    double band = 0.0;
    read(j, "band_halfwidth", band);
    cfg.band_halfwidth = band;
  }
  std::string interp = "linear";
  read(j, "interpolation", interp);
  if (interp == "linear") {
    cfg.interpolation = Interpolation::Linear;
  } else if (interp == "catmull_rom") {
    cfg.interpolation = Interpolation::CatmullRom;
  } else {
    throw Error(Errc::InvalidParameter, "unknown interpolation '" + interp + "'");
  }
  cfg.validate();
  return cfg;
}

json to_json(const AlignmentMetrics& m) {
  return {{"rmse_m", m.rmse}, {"mae_m", m.mae}, {"max_m", m.max}, {"n_waypoints", m.n_waypoints}};
}

json to_json(const ToolPath& path, const AlignmentMetrics& metrics) {
  json wps = json::array();
  for (const auto& w : path.waypoints) {
    const auto& q = w.orientation;
    wps.push_back({{"position_m", vec(w.position)},
                   {"quaternion_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})},
                   {"kind", to_string(w.kind)},
                   {"travel", vec(w.travel)},
                   {"contour", w.contour}});
  }
  const auto& f = path.frame;
  return {{"waypoints", std::move(wps)},
          {"config", to_json(path.config)},
          {"metrics", to_json(metrics)},
          {"source_id", path.source_id},
          {"total_length_m", path.total_length},
          {"skipped_planes", path.skipped_planes},
          {"frame",
           {{"origin", vec(f.origin)},
            {"u", vec(f.u)},
            {"v", vec(f.v)},
            {"n", vec(f.n)},
            {"extent_u", f.extent_u},
            {"extent_v", f.extent_v}}}};
}

ToolPath tool_path_from_json(const json& j) {
  try {
    ToolPath path;
    for (const auto& w : j.at("waypoints")) {
      Waypoint wp;
      wp.position = read_vec(w.at("position_m"));
      const auto& q = w.at("quaternion_wxyz");
      wp.orientation = Eigen::Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
                                          q.at(3).get<double>());
      wp.kind = segment_kind_from_string(w.at("kind").get<std::string>());
      wp.travel = read_vec(w.at("travel"));
      wp.contour = w.value("contour", -1);
      path.waypoints.push_back(wp);
    }
    if (j.contains("config")) path.config = planner_config_from_json(j["config"]);
    path.source_id = j.value("source_id", "");
    path.total_length = j.value("total_length_m", path_length(path.waypoints));
    path.skipped_planes = j.value("skipped_planes", std::vector<int>{});
    if (j.contains("frame")) {
      const auto& f = j["frame"];
      path.frame.origin = read_vec(f.at("origin"));
      path.frame.u = read_vec(f.at("u"));
      path.frame.v = read_vec(f.at("v"));
      path.frame.n = read_vec(f.at("n"));
      path.frame.extent_u = f.at("extent_u").get<double>();
      path.frame.extent_v = f.at("extent_v").get<double>();
    }
    return path;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed tool path: ") + e.what());
  }
}

}  // namespace surfkit::planner
