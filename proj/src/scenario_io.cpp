#include <fmt/format.h>

#include "gasdetect/config.hpp"
#include "gasdetect/error.hpp"
#include "gasdetect/simkit.hpp"

namespace gasdetect {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("scenario field '{}': {}", key, e.what()));
  }
}

Vec3 read_vec3(const json& j, const char* key, Vec3 fallback = {}) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_array() || it->size() != 3 || !(*it)[0].is_number() || !(*it)[1].is_number() ||
      !(*it)[2].is_number()) {
    throw ConfigError(fmt::format("scenario field '{}' must be an array of 3 numbers", key));
  }
  return {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
}

json vec3_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

std::string_view mode_name(SourceMode m) { return m == SourceMode::plume ? "plume" : "puff"; }

std::string_view kind_name(InterferenceKind k) {
  switch (k) {
    case InterferenceKind::airflow: return "airflow";
    case InterferenceKind::temperature: return "temperature";
    case InterferenceKind::shake: return "shake";
  }
  return "?";
}

NodeId resolve_node(const json& v, const Topology& topology) {
  if (v.is_string()) {
    if (auto id = topology.find_label(v.get<std::string>())) return *id;
    throw ConfigError(fmt::format("unknown node label {}", v.dump()));
  }
  if (v.is_number_unsigned()) return v.get<NodeId>();
  throw ConfigError("node must be a label string or a non-negative id");
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  Scenario s;
  read(j, "name", s.name);
  if (auto t = j.find("topology"); t != j.end()) s.topology = topology_from_json(*t);
  s.wind = read_vec3(j, "wind");
  read(j, "duration_s", s.duration_s);
  read(j, "sample_interval_s", s.sample_interval_s);
  if (auto seed = j.find("seed"); seed != j.end()) {
    if (!seed->is_number_unsigned()) throw ConfigError("scenario seed must be an unsigned integer");
    s.seed = seed->get<std::uint64_t>();
  }
  read(j, "strength_jitter", s.strength_jitter);
  read(j, "turbulence", s.turbulence);

  if (auto src = j.find("sources"); src != j.end()) {
    if (!src->is_array()) throw ConfigError("'sources' must be an array");
    for (const auto& e : *src) {
      DiffusionSource d;
      d.position = read_vec3(e, "position");
      std::string mode = "plume";
      read(e, "mode", mode);
      if (mode == "plume") {
        d.mode = SourceMode::plume;
      } else if (mode == "puff") {
        d.mode = SourceMode::puff;
      } else {
        throw ConfigError(fmt::format("unknown source mode '{}'", mode));
      }
      read(e, "strength", d.strength);
      read(e, "start_t", d.start_t);
      read(e, "settling_rate", d.settling_rate);
      s.sources.push_back(d);
    }
  }

  if (auto ev = j.find("interference"); ev != j.end()) {
    if (!ev->is_array()) throw ConfigError("'interference' must be an array");
    for (const auto& e : *ev) {
      InterferenceEvent x;
      std::string kind;
      read(e, "kind", kind);
      if (kind == "airflow") {
        x.kind = InterferenceKind::airflow;
        x.wind = read_vec3(e, "wind");
      } else if (kind == "temperature") {
        x.kind = InterferenceKind::temperature;
        read(e, "delta_temp_c", x.delta_temp_c);
      } else if (kind == "shake") {
        x.kind = InterferenceKind::shake;
        read(e, "amplitude", x.amplitude);
        if (!e.contains("node")) throw ConfigError("shake event needs a 'node'");
        x.node = resolve_node(e.at("node"), s.topology);
      } else {
        throw ConfigError(fmt::format("unknown interference kind '{}'", kind));
      }
      read(e, "start_t", x.start_t);
      read(e, "duration", x.duration);
      s.interference.push_back(x);
    }
  }

  if (auto d = j.find("dispersion"); d != j.end()) {
    auto& p = s.dispersion;
    read(*d, "diffusivity", p.diffusivity);
    read(*d, "cutoff_m", p.cutoff_m);
    read(*d, "vertical_weight", p.vertical_weight);
    read(*d, "min_radius_m", p.min_radius_m);
    read(*d, "advection_time_s", p.advection_time_s);
    read(*d, "crosswind_spread", p.crosswind_spread);
    read(*d, "wind_reference_ms", p.wind_reference_ms);
    read(*d, "removal_rate", p.removal_rate);
    read(*d, "room_volume_m3", p.room_volume_m3);
    read(*d, "ground_reflection", p.ground_reflection);
  }
  if (auto m = j.find("sensor"); m != j.end()) {
    auto& p = s.sensor;
    read(*m, "baseline", p.baseline);
    read(*m, "gain", p.gain);
    read(*m, "noise_sigma", p.noise_sigma);
    read(*m, "temp_coeff", p.temp_coeff);
    read(*m, "drift_rate", p.drift_rate);
    read(*m, "reference_temp_c", p.reference_temp_c);
    read(*m, "response_time_s", p.response_time_s);
    read(*m, "airflow_coeff", p.airflow_coeff);
  }
  s.validate();
  return s;
}

json to_json(const Scenario& s) {
  json sources = json::array();
  for (const auto& d : s.sources) {
    sources.push_back({{"position", vec3_json(d.position)},
                       {"mode", std::string(mode_name(d.mode))},
                       {"strength", d.strength},
                       {"start_t", d.start_t},
                       {"settling_rate", d.settling_rate}});
  }
  json events = json::array();
  for (const auto& e : s.interference) {
    json x{{"kind", std::string(kind_name(e.kind))},
           {"start_t", e.start_t},
           {"duration", e.duration}};
    switch (e.kind) {
      case InterferenceKind::airflow: x["wind"] = vec3_json(e.wind); break;
      case InterferenceKind::temperature: x["delta_temp_c"] = e.delta_temp_c; break;
      case InterferenceKind::shake:
        x["amplitude"] = e.amplitude;
        x["node"] = s.topology.name(e.node);
        break;
    }
    events.push_back(std::move(x));
  }
  const auto& d = s.dispersion;
  const auto& m = s.sensor;
  return json{{"name", s.name},
              {"topology", to_json(s.topology)},
              {"sources", std::move(sources)},
              {"interference", std::move(events)},
              {"wind", vec3_json(s.wind)},
              {"duration_s", s.duration_s},
              {"sample_interval_s", s.sample_interval_s},
              {"seed", s.seed},
              {"strength_jitter", s.strength_jitter},
              {"turbulence", s.turbulence},
              {"dispersion",
               {{"diffusivity", d.diffusivity},
                {"cutoff_m", d.cutoff_m},
                {"vertical_weight", d.vertical_weight},
                {"min_radius_m", d.min_radius_m},
                {"advection_time_s", d.advection_time_s},
                {"crosswind_spread", d.crosswind_spread},
                {"wind_reference_ms", d.wind_reference_ms},
                {"removal_rate", d.removal_rate},
                {"room_volume_m3", d.room_volume_m3},
                {"ground_reflection", d.ground_reflection}}},
              {"sensor",
               {{"baseline", m.baseline},
                {"gain", m.gain},
                {"noise_sigma", m.noise_sigma},
                {"temp_coeff", m.temp_coeff},
                {"drift_rate", m.drift_rate},
                {"reference_temp_c", m.reference_temp_c},
                {"response_time_s", m.response_time_s},
                {"airflow_coeff", m.airflow_coeff}}}};
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path));
}

}  // namespace gasdetect
