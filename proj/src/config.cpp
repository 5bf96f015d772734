#include "gasdetect/config.hpp"

#include <fstream>
#include <type_traits>

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

using nlohmann::json;

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_unsigned_v<T>) {
    if (!it->is_number_unsigned()) {
      throw ConfigError(fmt::format("field '{}' must be a non-negative integer", key));
    }
  }
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("field '{}': {}", key, e.what()));
  }
}

Vec3 vec3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(fmt::format("{} must be an array of 3 numbers", what));
  }
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("{} must be an array of 3 numbers", what));
  }
}

}  // namespace

DetectorConfig detector_config_from_json(const json& j, DetectorConfig cfg) {
  if (!j.is_object()) throw ConfigError("detector config must be a JSON object");
  read_field(j, "filter_window", cfg.filter_window);
  read_field(j, "extremum_radius", cfg.extremum_radius);
  read_field(j, "trend_tolerance", cfg.trend_tolerance);
  read_field(j, "slope_threshold", cfg.slope_threshold);
  read_field(j, "dtw_norm_order", cfg.dtw_norm_order);
  read_field(j, "global_dtw_threshold", cfg.global_dtw_threshold);
  read_field(j, "local_dtw_threshold", cfg.local_dtw_threshold);
  read_field(j, "global_quorum", cfg.global_quorum);
  read_field(j, "periodicity_window_s", cfg.periodicity_window_s);
  read_field(j, "periodicity_count", cfg.periodicity_count);
  read_field(j, "history_s", cfg.history_s);
  read_field(j, "flat_range", cfg.flat_range);
  read_field(j, "global_amplitude_ratio", cfg.global_amplitude_ratio);
  const json known = to_json(DetectorConfig{});
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError(fmt::format("unknown detector field '{}'", key));
  }
  cfg.validate();
  return cfg;
}

json to_json(const DetectorConfig& cfg) {
  return json{{"filter_window", cfg.filter_window},
              {"extremum_radius", cfg.extremum_radius},
              {"trend_tolerance", cfg.trend_tolerance},
              {"slope_threshold", cfg.slope_threshold},
              {"dtw_norm_order", cfg.dtw_norm_order},
              {"global_dtw_threshold", cfg.global_dtw_threshold},
              {"local_dtw_threshold", cfg.local_dtw_threshold},
              {"global_quorum", cfg.global_quorum},
              {"periodicity_window_s", cfg.periodicity_window_s},
              {"periodicity_count", cfg.periodicity_count},
              {"history_s", cfg.history_s},
              {"flat_range", cfg.flat_range},
              {"global_amplitude_ratio", cfg.global_amplitude_ratio}};
}

Topology topology_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("topology must be a JSON object");
  double radius = 2.1;
  read_field(j, "neighbor_radius_m", radius);
  if (auto preset = j.find("preset"); preset != j.end()) {
    if (*preset != "grid12") {
      throw ConfigError(fmt::format("unknown topology preset {}", preset->dump()));
    }
    return grid12_topology(radius);
  }
  auto nodes_it = j.find("nodes");
  if (nodes_it == j.end() || !nodes_it->is_array()) {
    throw ConfigError("topology needs either 'preset' or a 'nodes' array");
  }
  std::vector<NodeLayout> nodes;
  for (const auto& n : *nodes_it) {
    NodeLayout layout;
    if (!n.contains("id") || !n.contains("position")) {
      throw ConfigError("each node needs 'id' and 'position'");
    }
    read_field(n, "id", layout.id);
    read_field(n, "label", layout.label);
    layout.position = vec3_from_json(n.at("position"), "node position");
    layout.layer = layer_for_height(layout.position.z);
    if (auto layer = n.find("layer"); layer != n.end()) {
      if (*layer == "ground") {
        layout.layer = Layer::ground;
      } else if (*layer == "elevated") {
        layout.layer = Layer::elevated;
      } else {
        throw ConfigError(fmt::format("node {}: unknown layer {}", layout.id, layer->dump()));
      }
    }
    nodes.push_back(std::move(layout));
  }
  return Topology(std::move(nodes), radius);
}

json to_json(const Topology& topology) {
  json nodes = json::array();
  for (const auto& n : topology.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"position", {n.position.x, n.position.y, n.position.z}},
                     {"layer", std::string(to_string(n.layer))}});
  }
  return json{{"neighbor_radius_m", topology.neighbor_radius()}, {"nodes", std::move(nodes)}};
}

AppConfig app_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  AppConfig cfg;
  if (auto t = j.find("topology"); t != j.end()) cfg.topology = topology_from_json(*t);
  if (auto d = j.find("detector"); d != j.end()) cfg.detector = detector_config_from_json(*d);
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

AppConfig load_app_config(const std::filesystem::path& path) {
  return app_config_from_json(read_json_file(path));
}

}  // namespace gasdetect
