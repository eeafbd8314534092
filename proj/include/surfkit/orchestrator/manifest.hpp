#pragma once

#include "surfkit/control/plant.hpp"
#include "surfkit/perception/config.hpp"
#include "surfkit/perception/synthetic_scan.hpp"
#include "surfkit/planner/config.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surfkit::orchestrator {

inline constexpr std::array<std::string_view, 7> kStages = {"scan-ingest", "defect-detect", "plan",    "simulate",
                                                           "validate",    "execute",       "qc"};

/// Artifact kinds served by the API and their file names in a run
/// directory.
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kArtifactFiles = {{
    {"cloud", "cloud.ply"},
    {"defects", "defects.json"},
    {"path", "path.json"},
    {"trajectory_sim", "trajectory_sim.csv"},
    {"trajectory", "trajectory.csv"},
    {"metrics", "metrics.json"},
    {"transcript", "transcript.log"},
}};
/// Throws NotFound for an unknown kind.
std::string_view artifact_file(std::string_view kind);

enum class StageStatus { Pending, Running, Ok, Failed };
std::string_view to_string(StageStatus s);
StageStatus stage_status_from_string(std::string_view s);

struct StageState {
  std::string name;
  StageStatus status = StageStatus::Pending;
  std::string reason;  // set when failed
  std::size_t attempts = 0;
};

struct ArtifactRef {
  std::string file;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunInputs {
  std::optional<std::filesystem::path> cloud;
  std::optional<std::string> cloud_unit;  // "mm" or "m"; format default otherwise
  std::optional<perception::SyntheticScanSpec> synthetic;
};

struct RunConfig {
  perception::PerceptionConfig perception;
  planner::PlannerConfig planner;
  control::PlantConfig plant;                                  // execution plant
  control::Vibration execution_vibration{1e-3, 10.0};          // disturbance during execute
  std::uint64_t seed = 1;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing fields keep their defaults. Throws ParseError, InvalidParameter.
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunInputs& in);
RunInputs run_inputs_from_json(const nlohmann::json& j);

struct RunManifest {
  std::string id;
  std::string created_at;  // UTC, ISO 8601
  nlohmann::json inputs;   // RunInputs plus the input digest
  nlohmann::json config;   // RunConfig plus kb_sha256
  std::vector<StageState> stages;
  std::map<std::string, ArtifactRef> artifacts;  // by kind
  ArtifactRef session;
  nlohmann::json wizard;  // status, step, prompt, action: a copy for readers
  std::uint64_t revision = 0;

  StageState& stage(std::string_view name);
  const StageState& stage(std::string_view name) const;
  /// Stages before `name` in pipeline order.
  std::vector<std::string_view> upstream(std::string_view name) const;
  /// Every ok stage has all upstream stages ok.
  bool consistent() const;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Random version 4 UUID.
std::string make_run_id();
std::string utc_timestamp();

}  // namespace surfkit::orchestrator
