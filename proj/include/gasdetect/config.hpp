#pragma once

// JSON (de)serialization of topology and detector settings.
// Schema: docs/config-schema.md.

#include <filesystem>

#include "json.hpp"

#include "gasdetect/model.hpp"

namespace gasdetect {

struct AppConfig {
  Topology topology = grid12_topology();
  DetectorConfig detector;
};

// Missing fields keep their defaults. Throws ConfigError on bad values or types.
DetectorConfig detector_config_from_json(const nlohmann::json& j, DetectorConfig base = {});
nlohmann::json to_json(const DetectorConfig& cfg);

// Either {"preset": "grid12", "neighbor_radius_m": r} or an explicit node list.
Topology topology_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Topology& topology);

AppConfig app_config_from_json(const nlohmann::json& j);
AppConfig load_app_config(const std::filesystem::path& path);

// Reads and parses a JSON document; parse failures become ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace gasdetect
