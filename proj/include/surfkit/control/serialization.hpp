#pragma once

#include "surfkit/control/gains.hpp"
#include "surfkit/control/simulation.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace surfkit::control {

nlohmann::json to_json(const PlantConfig& plant);
/// Missing keys keep their defaults. Throws InvalidParameter.
PlantConfig plant_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PidGains& gains);
nlohmann::json to_json(const WrenchRegion& region);
nlohmann::json to_json(const ControlMetrics& metrics);

/// Header line plus one row per sample, doubles in round-trip precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace surfkit::control
