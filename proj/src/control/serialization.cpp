#include "surfkit/control/serialization.hpp"

#include "surfkit/error.hpp"

#include <cstdio>
#include <sstream>

namespace surfkit::control {
namespace {

using nlohmann::json;

json vec6(const Vec6& v) { return json(std::vector<double>(v.data(), v.data() + 6)); }

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidParameter, std::string("bad value for '") + key + "': " + e.what());
  }
}

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, ",%.17g", v);
  line += buf;
}

}  // namespace

json to_json(const PlantConfig& p) {
  return {{"contact_stiffness", p.contact_stiffness},
          {"contact_damping", p.contact_damping},
          {"admittance", p.admittance},
          {"force_limit", p.force_limit},
          {"vibration", {{"amplitude", p.vibration.amplitude}, {"frequency", p.vibration.frequency}}},
          {"dt", p.dt},
          {"noise_sigma", p.noise_sigma},
          {"feed", p.feed}};
}

PlantConfig plant_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidParameter, "plant config must be an object");
  PlantConfig p;
  read(j, "contact_stiffness", p.contact_stiffness);
  read(j, "contact_damping", p.contact_damping);
  read(j, "admittance", p.admittance);
  read(j, "force_limit", p.force_limit);
  read(j, "dt", p.dt);
  read(j, "noise_sigma", p.noise_sigma);
  read(j, "feed", p.feed);
  if (j.contains("vibration")) {
    read(j["vibration"], "amplitude", p.vibration.amplitude);
    read(j["vibration"], "frequency", p.vibration.frequency);
  }
  p.validate();
  return p;
}

json to_json(const PidGains& g) {
  return {{"kp", vec6(g.kp)},
          {"ki", vec6(g.ki)},
          {"kd", vec6(g.kd)},
          {"beta", g.beta},
          {"integral_clamp", vec6(g.integral_clamp)}};
}

json to_json(const WrenchRegion& r) { return {{"lo", vec6(r.lo)}, {"hi", vec6(r.hi)}}; }

json to_json(const ControlMetrics& m) {
  return {{"mae_n", m.mae},
          {"max_after_rise_n", m.max_after_rise ? json(*m.max_after_rise) : json(nullptr)},
          {"rise_time_s", m.rise_time ? json(*m.rise_time) : json(nullptr)},
          {"setpoint_n", m.setpoint},
          {"contact_samples", m.contact_samples},
          {"success", m.success},
          {"failure_reason", m.failure_reason}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,kind,px,py,pz,qw,qx,qy,qz,ax,ay,az,Fx,Fy,Fz,Tx,Ty,Tz,ex,ey,ez,etx,ety,etz,"
         "upose_x,upose_y,upose_z,uwrench_x,uwrench_y,uwrench_z,uwrench_tx,uwrench_ty,uwrench_tz,outside\n";
  std::string line;
  for (const auto& s : traj.samples) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    line = buf;
    line += ',';
    line += planner::to_string(s.kind);
    for (int i = 0; i < 3; ++i) put(line, s.commanded(i));
    put(line, s.orientation.w());
    put(line, s.orientation.x());
    put(line, s.orientation.y());
    put(line, s.orientation.z());
    for (int i = 0; i < 3; ++i) put(line, s.actual(i));
    for (int i = 0; i < 6; ++i) put(line, s.wrench(i));
    for (int i = 0; i < 6; ++i) put(line, s.error(i));
    for (int i = 0; i < 3; ++i) put(line, s.u_pose(i));
    for (int i = 0; i < 6; ++i) put(line, s.u_wrench(i));
    line += s.outside ? ",1\n" : ",0\n";
    out << line;
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  return out.str();
}

}  // namespace surfkit::control
