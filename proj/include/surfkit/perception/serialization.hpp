#pragma once

#include "surfkit/perception/config.hpp"
#include "surfkit/perception/defects.hpp"
#include "surfkit/perception/synthetic_scan.hpp"

#include <json.hpp>

namespace surfkit::perception {

nlohmann::json to_json(const PerceptionConfig& cfg);
/// Missing keys keep their defaults. Throws InvalidParameter.
PerceptionConfig perception_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DefectReport& report);
nlohmann::json to_json(const SyntheticScanSpec& spec);
SyntheticScanSpec scan_spec_from_json(const nlohmann::json& j);

}  // namespace surfkit::perception
