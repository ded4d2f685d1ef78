#pragma once

// Internal JSON helpers shared by the config loader and the trace codec.

#include <nlohmann/json.hpp>

#include "vpg/scenario/conditions.hpp"
#include "vpg/scenario/scene.hpp"

namespace vpg::orchestrator::detail {

nlohmann::json scene_to_json(const scenario::Scene& scene);
scenario::Scene scene_from_json(const nlohmann::json& j);

nlohmann::json conditions_to_json(const scenario::Conditions& c);
scenario::Conditions conditions_from_json(const nlohmann::json& j);

}  // namespace vpg::orchestrator::detail
