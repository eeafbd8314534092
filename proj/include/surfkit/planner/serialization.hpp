#pragma once

#include "surfkit/planner/config.hpp"
#include "surfkit/planner/plan.hpp"

#include <json.hpp>

namespace surfkit::planner {

nlohmann::json to_json(const PlannerConfig& cfg);
/// Missing keys keep their defaults. Throws InvalidParameter.
PlannerConfig planner_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AlignmentMetrics& m);
nlohmann::json to_json(const ToolPath& path, const AlignmentMetrics& metrics);
/// Throws ParseError.
ToolPath tool_path_from_json(const nlohmann::json& j);

}  // namespace surfkit::planner
