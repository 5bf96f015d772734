#pragma once

// Deterministic gas-dispersion and sensor-response simulation.
//
// Concentrations are in ppm, sensor readings in sensor units. Sources are either
// a continuous plume (quasi-steady kernel) or an instantaneous puff (Gaussian
// cloud); both settle toward the floor and reflect off it. A run is fully
// determined by the Scenario, seed included.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gasdetect/model.hpp"

namespace gasdetect {

enum class SourceMode { plume, puff };

struct DiffusionSource {
  Vec3 position;                   // release point; z is the initial effective height
  SourceMode mode = SourceMode::plume;
  double strength = 1.0;           // plume: Q in ppm*m^3/s, puff: M in ppm*m^3
  double start_t = 0.0;            // s
  double settling_rate = 0.0;      // m/s, downward drift of the effective height
};

struct DispersionParams {
  double diffusivity = 0.05;       // D, m^2/s (eddy diffusivity of room air)
  double cutoff_m = 1.0;           // plume exponential cutoff length lambda
  double vertical_weight = 2.0;    // vertical distances count this many times
  double min_radius_m = 0.1;       // plume kernel is clamped inside this radius
  double advection_time_s = 2.0;   // plume centre moves downwind by wind * this
  double crosswind_spread = 0.5;   // 1/m, crosswind widening per metre downwind
  double wind_reference_ms = 0.3;  // plume dilution Q / (1 + |u| / u_ref)
  double removal_rate = 0.0;       // 1/s, first-order loss (ventilated space)
  double room_volume_m3 = 0.0;     // > 0 enables uniform background accumulation
  bool ground_reflection = true;
};

struct SensorModel {
  double baseline = 100.0;         // sensor units
  double gain = 1.0;               // sensor units per ppm
  double noise_sigma = 0.3;        // sensor units
  double temp_coeff = 2.5;         // sensor units per degC
  double drift_rate = 0.5;         // sensor units per hour
  double reference_temp_c = 20.0;  // T0
  double response_time_s = 3.0;    // first-order lag on concentration
  double airflow_coeff = 6.0;      // cooling, sensor units per m/s of forced flow
};

enum class InterferenceKind { airflow, temperature, shake };

struct InterferenceEvent {
  InterferenceKind kind = InterferenceKind::temperature;
  double start_t = 0.0;
  double duration = 0.0;
  Vec3 wind;                // airflow: forced flow added to the wind field, m/s
  double delta_temp_c = 0;  // temperature: global offset reached at the end of the ramp
  double amplitude = 0;     // shake: spike height, sensor units
  NodeId node = 0;          // shake: the one node that is shaken
};

struct Scenario {
  std::string name = "scenario";
  Topology topology = grid12_topology();
  std::vector<DiffusionSource> sources;
  std::vector<InterferenceEvent> interference;
  Vec3 wind;                      // base wind, m/s
  double duration_s = 150.0;
  double sample_interval_s = 1.0;
  std::uint64_t seed = 1;
  DispersionParams dispersion;
  SensorModel sensor;
  double strength_jitter = 0.0;   // per-trial log-normal sigma on source strength
  bool turbulence = true;

  // Throws ConfigError with a descriptive message.
  void validate() const;
};

// Seeded random stream. Uses mt19937_64 (fully specified by the standard) with
// local uniform/Gaussian transforms so that draws are identical across
// standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  double uniform();   // [0, 1)
  double gaussian();  // N(0, 1)

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream seed from a scenario seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Effective release height at time t (clamped at the floor).
double effective_height(const DiffusionSource& source, double t);

double plume_concentration(const DiffusionSource& source, Vec3 point, double t, Vec3 wind,
                           const DispersionParams& params = {});

double puff_concentration(const DiffusionSource& source, Vec3 point, double t, Vec3 wind,
                          const DispersionParams& params = {});

// Smooth pseudo-periodic multiplier in [0.5, 1.5]: three seeded low-frequency
// sinusoids whose phases drift with position, so nearby points move together.
double turbulence_factor(double t, Vec3 point, std::uint64_t seed);

// baseline + gain*c + temp_coeff*(T - T0) + drift_rate*t + noise.
double sensor_reading(const SensorModel& model, double concentration_ppm, double temp_c,
                      double t, RandomStream& rng);

// Uniform background from accumulated plume emission (zero when room_volume_m3 == 0).
double background_concentration(const DiffusionSource& source, double t,
                                const DispersionParams& params, Vec3 wind);

// Raw samples ordered by (t, node id), one per node per tick.
std::vector<Sample> run_scenario(const Scenario& scenario);

// Noise-free concentration (ppm) at every node for every tick, same order as
// run_scenario; turbulence and source jitter applied, sensor lag not.
std::vector<Sample> concentration_log(const Scenario& scenario);

// Scenario JSON; schema in docs/config-schema.md.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace gasdetect
