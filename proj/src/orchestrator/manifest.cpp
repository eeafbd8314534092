#include "surfkit/orchestrator/manifest.hpp"

#include "surfkit/control/serialization.hpp"
#include "surfkit/error.hpp"
#include "surfkit/perception/serialization.hpp"
#include "surfkit/planner/serialization.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

namespace surfkit::orchestrator {

using nlohmann::json;

std::string_view artifact_file(std::string_view kind) {
  for (const auto& [k, f] : kArtifactFiles) {
    if (k == kind) return f;
  }
  throw Error(Errc::NotFound, "unknown artifact kind '" + std::string(kind) + "'");
}

std::string_view to_string(StageStatus s) {
  switch (s) {
    case StageStatus::Pending: return "pending";
    case StageStatus::Running: return "running";
    case StageStatus::Ok: return "ok";
    case StageStatus::Failed: return "failed";
  }
  return "pending";
}

StageStatus stage_status_from_string(std::string_view s) {
  if (s == "pending") return StageStatus::Pending;
  if (s == "running") return StageStatus::Running;
  if (s == "ok") return StageStatus::Ok;
  if (s == "failed") return StageStatus::Failed;
  throw Error(Errc::ParseError, "unknown stage status '" + std::string(s) + "'");
}

json to_json(const RunConfig& c) {
  return {{"perception", perception::to_json(c.perception)},
          {"planner", planner::to_json(c.planner)},
          {"plant", control::to_json(c.plant)},
          {"execution_vibration", {{"amplitude", c.execution_vibration.amplitude}, {"frequency", c.execution_vibration.frequency}}},
          {"seed", c.seed}};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "run config must be an object");
  RunConfig c;
  try {
    if (j.contains("perception")) c.perception = perception::perception_config_from_json(j["perception"]);
    if (j.contains("planner")) c.planner = planner::planner_config_from_json(j["planner"]);
    if (j.contains("plant")) c.plant = control::plant_config_from_json(j["plant"]);
    if (j.contains("execution_vibration")) {
      const auto& v = j["execution_vibration"];
      c.execution_vibration.amplitude = v.value("amplitude", c.execution_vibration.amplitude);
      c.execution_vibration.frequency = v.value("frequency", c.execution_vibration.frequency);
      if (c.execution_vibration.amplitude < 0 || c.execution_vibration.frequency < 0)
        throw Error(Errc::InvalidParameter, "execution vibration must be non-negative");
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed run config: ") + e.what());
  }
  return c;
}

json to_json(const RunInputs& in) {
  json j = json::object();
  if (in.cloud) j["cloud"] = in.cloud->string();
  if (in.cloud_unit) j["cloud_unit"] = *in.cloud_unit;
  if (in.synthetic) j["synthetic"] = perception::to_json(*in.synthetic);
  return j;
}

RunInputs run_inputs_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "run inputs must be an object");
  RunInputs in;
  try {
    if (j.contains("cloud")) in.cloud = j["cloud"].get<std::string>();
    if (j.contains("cloud_unit")) in.cloud_unit = j["cloud_unit"].get<std::string>();
    if (j.contains("synthetic")) in.synthetic = perception::scan_spec_from_json(j["synthetic"]);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed run inputs: ") + e.what());
  }
  return in;
}

StageState& RunManifest::stage(std::string_view name) {
  for (auto& s : stages) {
    if (s.name == name) return s;
  }
  throw Error(Errc::NotFound, "unknown stage '" + std::string(name) + "'");
}

const StageState& RunManifest::stage(std::string_view name) const {
  return const_cast<RunManifest*>(this)->stage(name);
}

std::vector<std::string_view> RunManifest::upstream(std::string_view name) const {
  std::vector<std::string_view> out;
  for (auto s : kStages) {
    if (s == name) return out;
    out.push_back(s);
  }
  throw Error(Errc::NotFound, "unknown stage '" + std::string(name) + "'");
}

bool RunManifest::consistent() const {
  for (const auto& s : stages) {
    if (s.status != StageStatus::Ok) continue;
    for (auto up : upstream(s.name)) {
      if (stage(up).status != StageStatus::Ok) return false;
    }
  }
  return true;
}

namespace {

json ref_json(const ArtifactRef& r) { return {{"file", r.file}, {"sha256", r.sha256}, {"bytes", r.bytes}}; }

ArtifactRef ref_from_json(const json& j) {
  return {j.at("file").get<std::string>(), j.at("sha256").get<std::string>(), j.at("bytes").get<std::uint64_t>()};
}

}  // namespace

json to_json(const RunManifest& m) {
  json stages = json::array();
  for (const auto& s : m.stages)
    stages.push_back({{"name", s.name}, {"status", to_string(s.status)}, {"reason", s.reason}, {"attempts", s.attempts}});
  json artifacts = json::object();
  for (const auto& [k, r] : m.artifacts) artifacts[k] = ref_json(r);
  return {{"id", m.id},
          {"created_at", m.created_at},
          {"revision", m.revision},
          {"inputs", m.inputs},
          {"config", m.config},
          {"stages", stages},
          {"artifacts", artifacts},
          {"session", ref_json(m.session)},
          {"wizard", m.wizard}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.id = j.at("id").get<std::string>();
    m.created_at = j.at("created_at").get<std::string>();
    m.revision = j.at("revision").get<std::uint64_t>();
    m.inputs = j.at("inputs");
    m.config = j.at("config");
    for (const auto& s : j.at("stages")) {
      m.stages.push_back({s.at("name").get<std::string>(), stage_status_from_string(s.at("status").get<std::string>()),
                          s.at("reason").get<std::string>(), s.at("attempts").get<std::size_t>()});
    }
    for (const auto& [k, r] : j.at("artifacts").items()) m.artifacts[k] = ref_from_json(r);
    m.session = ref_from_json(j.at("session"));
    m.wizard = j.at("wizard");
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed manifest: ") + e.what());
  }
}

std::string make_run_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}() ^
                                          static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count())};
  unsigned char b[16];
  for (int i = 0; i < 16; i += 8) {
    const std::uint64_t r = rng();
    for (int k = 0; k < 8; ++k) b[i + k] = static_cast<unsigned char>(r >> (8 * k));
  }
  b[6] = static_cast<unsigned char>((b[6] & 0x0F) | 0x40);
  b[8] = static_cast<unsigned char>((b[8] & 0x3F) | 0x80);
  char out[37];
  std::snprintf(out, sizeof out, "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x", b[0], b[1], b[2],
                b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11], b[12], b[13], b[14], b[15]);
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace surfkit::orchestrator
