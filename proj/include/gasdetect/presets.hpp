#pragma once

// Named scenarios for the grid12 deployment: eight detection set-ups (barrel
// state x space x barrel position), the interference kinds and a null run.
//
// Each source turns on at kSourceStart after a quiet lead-in; duration covers
// the lead-in plus the 120 s observation window.

#include <string>
#include <string_view>
#include <vector>

#include "gasdetect/simkit.hpp"

namespace gasdetect {

inline constexpr double kSourceStart = 30.0;
inline constexpr double kScenarioDuration = 150.0;

enum class Barrel { closed, open };
enum class Space { open, enclosed };

// Position 1 is (1, 1), between A, B, E and F; position 2 is (4, 1), 1 m from
// C0 and D0.
Vec3 barrel_position(int position);

Scenario detection_scenario(Barrel barrel, Space space, int position);
Scenario null_scenario();
Scenario interference_scenario(InterferenceKind kind);

// Preset names: "<closed|open>-barrel-<open|enclosed>-space-pos<1|2>",
// "null", "airflow", "temperature", "shake".
std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
Scenario preset(std::string_view name);

// The full experiment suite in report order.
std::vector<std::string> standard_suite();

}  // namespace gasdetect
