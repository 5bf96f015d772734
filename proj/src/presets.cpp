#include "gasdetect/presets.hpp"

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

namespace {

constexpr double kBarrelHeight = 0.35;

// Open space: a slow draught and steady air exchange. Enclosed space: still
// air, no exchange, vapour accumulates in the room volume.
constexpr Vec3 kDraught{-0.1, 0.0, 0.0};
constexpr double kOpenRemoval = 0.02;
constexpr double kRoomVolume = 200.0;

// Closed barrel: a weak leak from the lid seam.
constexpr double kLeakRate = 15.0;
constexpr double kLeakSettling = 0.005;
// Open barrel: the burst of vapour when the lid comes off, then evaporation.
constexpr double kBurstMass = 150.0;
constexpr double kEvaporation = 30.0;
constexpr double kVapourSettling = 0.01;

constexpr double kStrengthJitter = 0.35;

constexpr double kInterferenceStart = 40.0;

Scenario base(std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.duration_s = kScenarioDuration;
  s.strength_jitter = kStrengthJitter;
  return s;
}

std::string barrel_name(Barrel b) { return b == Barrel::open ? "open" : "closed"; }
std::string space_name(Space s) { return s == Space::open ? "open" : "enclosed"; }

}  // namespace

Vec3 barrel_position(int position) {
  switch (position) {
    case 1: return {1.0, 1.0, kBarrelHeight};
    case 2: return {4.0, 1.0, kBarrelHeight};
  }
  throw ConfigError(fmt::format("barrel position must be 1 or 2, got {}", position));
}

Scenario detection_scenario(Barrel barrel, Space space, int position) {
  Scenario s = base(fmt::format("{}-barrel-{}-space-pos{}", barrel_name(barrel),
                                space_name(space), position));
  const Vec3 at = barrel_position(position);
  if (space == Space::open) {
    s.wind = kDraught;
    s.dispersion.removal_rate = kOpenRemoval;
  } else {
    s.dispersion.room_volume_m3 = kRoomVolume;
  }
  if (barrel == Barrel::closed) {
    s.sources.push_back({at, SourceMode::plume, kLeakRate, kSourceStart, kLeakSettling});
  } else {
    s.sources.push_back({at, SourceMode::puff, kBurstMass, kSourceStart, kVapourSettling});
    s.sources.push_back({at, SourceMode::plume, kEvaporation, kSourceStart, kVapourSettling});
  }
  return s;
}

Scenario null_scenario() { return base("null"); }

Scenario interference_scenario(InterferenceKind kind) {
  InterferenceEvent e;
  e.kind = kind;
  e.start_t = kInterferenceStart;
  Scenario s;
  switch (kind) {
    case InterferenceKind::airflow:
      s = base("airflow");
      e.duration = 30.0;
      e.wind = {-2.0, 0.0, 0.0};
      break;
    case InterferenceKind::temperature:
      s = base("temperature");
      e.duration = 15.0;
      e.delta_temp_c = 8.0;
      break;
    case InterferenceKind::shake:
      s = base("shake");
      e.amplitude = 15.0;
      e.node = *s.topology.find_label("B1");
      break;
  }
  s.interference.push_back(e);
  return s;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (auto b : {Barrel::closed, Barrel::open}) {
    for (auto sp : {Space::open, Space::enclosed}) {
      for (int pos : {1, 2}) {
        names.push_back(detection_scenario(b, sp, pos).name);
      }
    }
  }
  for (const char* n : {"null", "airflow", "temperature", "shake"}) names.emplace_back(n);
  return names;
}

Scenario preset(std::string_view name) {
  for (auto b : {Barrel::closed, Barrel::open}) {
    for (auto sp : {Space::open, Space::enclosed}) {
      for (int pos : {1, 2}) {
        auto s = detection_scenario(b, sp, pos);
        if (s.name == name) return s;
      }
    }
  }
  if (name == "null") return null_scenario();
  if (name == "airflow") return interference_scenario(InterferenceKind::airflow);
  if (name == "temperature") return interference_scenario(InterferenceKind::temperature);
  if (name == "shake") return interference_scenario(InterferenceKind::shake);
  throw ConfigError(fmt::format("unknown preset '{}'", name));
}

std::vector<std::string> standard_suite() { return preset_names(); }

}  // namespace gasdetect
