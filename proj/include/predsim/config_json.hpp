#pragma once

// JSON (de)serialization of SimulationConfig. Field names are lower_snake_case
// and unknown fields are rejected.

#include <filesystem>

#include <json.hpp>

#include "predsim/types.hpp"

namespace predsim {

// require_predicates = false relaxes the parser for sweep base configs, where
// the grid supplies complex_predicate and beta_weights per parameter point.
SimulationConfig config_from_json(const nlohmann::json& j, bool require_predicates = true);
nlohmann::json config_to_json(const SimulationConfig& config);

SimulationConfig load_config(const std::filesystem::path& path, bool require_predicates = true);

}  // namespace predsim
