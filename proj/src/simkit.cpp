#include "gasdetect/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// 0 -> 1 over `edge` seconds, held for `duration`, back to 0 over `edge`.
double envelope(double tau, double duration, double edge = 2.0) {
  if (tau <= 0.0) return 0.0;
  if (tau < duration) return smoothstep(tau / edge);
  return smoothstep(tau / edge) * (1.0 - smoothstep((tau - duration) / edge));
}

// Linear 1 s rise then exponential decay.
double shake_pulse(double tau, double decay_s = 4.0) {
  if (tau <= 0.0) return 0.0;
  if (tau < 1.0) return tau;
  return std::exp(-(tau - 1.0) / decay_s);
}

double horizontal_speed(Vec3 wind) { return std::hypot(wind.x, wind.y); }

double plume_kernel(double r, const DispersionParams& p) {
  r = std::max(r, p.min_radius_m);
  return std::exp(-r / p.cutoff_m) / (4.0 * kPi * p.diffusivity * r);
}

bool finite(Vec3 v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

}  // namespace

// ---------------------------------------------------------------------------
// Random streams

double RandomStream::uniform() { return unit_from_bits(engine_()); }

double RandomStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

// ---------------------------------------------------------------------------
// Dispersion

double effective_height(const DiffusionSource& source, double t) {
  const double dt = std::max(0.0, t - source.start_t);
  return std::max(0.0, source.position.z - source.settling_rate * dt);
}

double plume_concentration(const DiffusionSource& source, Vec3 point, double t, Vec3 wind,
                           const DispersionParams& params) {
  if (t < source.start_t) return 0.0;
  const double h = effective_height(source, t);
  const double speed = horizontal_speed(wind);

  auto term = [&](double centre_z) {
    double dx = point.x - source.position.x;
    double dy = point.y - source.position.y;
    const double dz = point.z - centre_z;
    double widen = 1.0;
    double horizontal2 = dx * dx + dy * dy;
    if (speed > 1e-9) {
      const double ux = wind.x / speed;
      const double uy = wind.y / speed;
      dx -= wind.x * params.advection_time_s;
      dy -= wind.y * params.advection_time_s;
      const double along = dx * ux + dy * uy;
      const double cross = -dx * uy + dy * ux;
      widen = 1.0 + params.crosswind_spread * std::max(0.0, along);
      horizontal2 = along * along + (cross / widen) * (cross / widen);
    }
    const double vz = params.vertical_weight * dz / widen;
    return plume_kernel(std::sqrt(horizontal2 + vz * vz), params) / widen;
  };

  double c = term(h);
  if (params.ground_reflection) c += term(-h);
  const double q = source.strength / (1.0 + speed / params.wind_reference_ms);
  return std::max(0.0, q * c);
}

double puff_concentration(const DiffusionSource& source, Vec3 point, double t, Vec3 wind,
                          const DispersionParams& params) {
  const double tau = t - source.start_t;
  if (tau <= 0.0) return 0.0;
  const double h = effective_height(source, t);
  const double cx = source.position.x + wind.x * tau;
  const double cy = source.position.y + wind.y * tau;
  const double spread = 4.0 * params.diffusivity * tau;
  const double peak = source.strength / std::pow(kPi * spread, 1.5);

  const double dx = point.x - cx;
  const double dy = point.y - cy;
  const double horizontal2 = dx * dx + dy * dy;
  const double dz = point.z - h;
  double c = std::exp(-(horizontal2 + dz * dz) / spread);
  if (params.ground_reflection) {
    const double dzi = point.z + h;
    c += std::exp(-(horizontal2 + dzi * dzi) / spread);
  }
  return std::max(0.0, peak * c * std::exp(-params.removal_rate * tau));
}

double background_concentration(const DiffusionSource& source, double t,
                                const DispersionParams& params, Vec3 wind) {
  if (source.mode != SourceMode::plume || params.room_volume_m3 <= 0.0) return 0.0;
  const double tau = t - source.start_t;
  if (tau <= 0.0) return 0.0;
  const double q = source.strength / (1.0 + horizontal_speed(wind) / params.wind_reference_ms);
  const double k = params.removal_rate;
  const double emitted = k > 0.0 ? (1.0 - std::exp(-k * tau)) / k : tau;
  return q * emitted / params.room_volume_m3;
}

double turbulence_factor(double t, Vec3 point, std::uint64_t seed) {
  constexpr double kWavelength = 8.0;  // m
  double sum = 0.0;
  double weight = 0.0;
  std::uint64_t state = derive_seed(seed, 0x7475726275ULL);
  auto next = [&] {
    state = splitmix64(state);
    return unit_from_bits(state);
  };
  for (int k = 0; k < 3; ++k) {
    const double period = 12.0 + 30.0 * next();
    const double phase = 2.0 * kPi * next();
    const double amp = 0.5 + 0.5 * next();
    const double theta = 2.0 * kPi * next();
    const double cos_phi = 2.0 * next() - 1.0;
    const double sin_phi = std::sqrt(1.0 - cos_phi * cos_phi);
    const Vec3 dir{sin_phi * std::cos(theta), sin_phi * std::sin(theta), cos_phi};
    sum += amp * std::sin(2.0 * kPi * t / period + phase + 2.0 * kPi * dot(dir, point) / kWavelength);
    weight += amp;
  }
  return std::clamp(1.0 + 0.5 * sum / weight, 0.5, 1.5);
}

double sensor_reading(const SensorModel& model, double concentration_ppm, double temp_c,
                      double t, RandomStream& rng) {
  const double noise = model.noise_sigma > 0.0 ? model.noise_sigma * rng.gaussian() : 0.0;
  return model.baseline + model.gain * concentration_ppm +
         model.temp_coeff * (temp_c - model.reference_temp_c) + model.drift_rate * t / 3600.0 +
         noise;
}

// ---------------------------------------------------------------------------
// Scenario

void Scenario::validate() const {
  auto fail = [this](const std::string& what) {
    throw ConfigError(fmt::format("scenario '{}': {}", name, what));
  };
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) fail("duration_s must be positive");
  if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s)) {
    fail("sample_interval_s must be positive");
  }
  if (topology.size() == 0) fail("topology has no nodes");
  if (!finite(wind)) fail("wind must be finite");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    if (!(s.strength > 0.0)) fail(fmt::format("source {}: strength must be positive", i));
    if (!(s.settling_rate >= 0.0)) fail(fmt::format("source {}: settling_rate must be >= 0", i));
    if (!finite(s.position) || s.position.z < 0.0) {
      fail(fmt::format("source {}: position must be finite with z >= 0", i));
    }
    if (!(s.start_t >= 0.0)) fail(fmt::format("source {}: start_t must be >= 0", i));
  }
  for (std::size_t i = 0; i < interference.size(); ++i) {
    const auto& e = interference[i];
    if (!(e.start_t >= 0.0)) fail(fmt::format("interference {}: start_t must be >= 0", i));
    if (!(e.duration >= 0.0)) fail(fmt::format("interference {}: duration must be >= 0", i));
    switch (e.kind) {
      case InterferenceKind::airflow:
        if (!finite(e.wind)) fail(fmt::format("interference {}: wind must be finite", i));
        break;
      case InterferenceKind::temperature:
        if (!std::isfinite(e.delta_temp_c)) {
          fail(fmt::format("interference {}: delta_temp_c must be finite", i));
        }
        break;
      case InterferenceKind::shake:
        if (!topology.contains(e.node)) {
          fail(fmt::format("interference {}: shake targets unknown node {}", i, e.node));
        }
        if (!(e.amplitude >= 0.0)) fail(fmt::format("interference {}: amplitude must be >= 0", i));
        break;
    }
  }
  const auto& d = dispersion;
  if (!(d.diffusivity > 0.0)) fail("diffusivity must be positive");
  if (!(d.cutoff_m > 0.0)) fail("cutoff_m must be positive");
  if (!(d.vertical_weight > 0.0)) fail("vertical_weight must be positive");
  if (!(d.min_radius_m > 0.0)) fail("min_radius_m must be positive");
  if (!(d.advection_time_s >= 0.0)) fail("advection_time_s must be >= 0");
  if (!(d.crosswind_spread >= 0.0)) fail("crosswind_spread must be >= 0");
  if (!(d.wind_reference_ms > 0.0)) fail("wind_reference_ms must be positive");
  if (!(d.removal_rate >= 0.0)) fail("removal_rate must be >= 0");
  if (!(d.room_volume_m3 >= 0.0)) fail("room_volume_m3 must be >= 0");
  if (!(sensor.gain > 0.0)) fail("sensor gain must be positive");
  if (!(sensor.noise_sigma >= 0.0)) fail("sensor noise_sigma must be >= 0");
  if (!(sensor.response_time_s >= 0.0)) fail("sensor response_time_s must be >= 0");
  if (!(strength_jitter >= 0.0)) fail("strength_jitter must be >= 0");
}

namespace {

// Everything about a run that depends on time but not on sensor noise.
class Field {
 public:
  explicit Field(const Scenario& s) : s_(s), turbulence_seed_(derive_seed(s.seed, 0x77)) {
    RandomStream scene(derive_seed(s.seed, 0x50));
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
      const double z = scene.gaussian();
      DiffusionSource src = s.sources[i];
      src.strength *= std::exp(s.strength_jitter * z);
      sources_.push_back(src);
    }
  }

  Vec3 wind_at(double t) const {
    Vec3 w = s_.wind;
    for (const auto& e : s_.interference) {
      if (e.kind == InterferenceKind::airflow) w = w + envelope(t - e.start_t, e.duration) * e.wind;
    }
    return w;
  }

  double temperature_at(double t) const {
    double temp = s_.sensor.reference_temp_c;
    for (const auto& e : s_.interference) {
      if (e.kind == InterferenceKind::temperature && t > e.start_t) {
        temp += e.duration > 0.0 ? e.delta_temp_c * smoothstep((t - e.start_t) / e.duration)
                                 : e.delta_temp_c;
      }
    }
    return temp;
  }

  double concentration(Vec3 p, double t, Vec3 wind) const {
    double plume = 0.0;
    double background = 0.0;
    for (const auto& src : sources_) {
      plume += src.mode == SourceMode::plume ? plume_concentration(src, p, t, wind, s_.dispersion)
                                             : puff_concentration(src, p, t, wind, s_.dispersion);
      background += background_concentration(src, t, s_.dispersion, wind);
    }
    if (s_.turbulence && plume > 0.0) plume *= turbulence_factor(t, p, turbulence_seed_);
    return plume + background;
  }

 private:
  const Scenario& s_;
  std::uint64_t turbulence_seed_;
  std::vector<DiffusionSource> sources_;
};

std::size_t tick_count(const Scenario& s) {
  return static_cast<std::size_t>(std::floor(s.duration_s / s.sample_interval_s + 1e-9)) + 1;
}

}  // namespace

std::vector<Sample> concentration_log(const Scenario& scenario) {
  scenario.validate();
  const Field field(scenario);
  const auto& nodes = scenario.topology.nodes();
  std::vector<Sample> out;
  const std::size_t ticks = tick_count(scenario);
  out.reserve(ticks * nodes.size());
  for (std::size_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * scenario.sample_interval_s;
    const Vec3 wind = field.wind_at(t);
    for (const auto& n : nodes) out.push_back({n.id, t, field.concentration(n.position, t, wind)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
    return a.t < b.t || (a.t == b.t && a.node_id < b.node_id);
  });
  return out;
}

std::vector<Sample> run_scenario(const Scenario& scenario) {
  scenario.validate();
  const Field field(scenario);
  const auto& sensor = scenario.sensor;
  const double dt = scenario.sample_interval_s;
  const double lag_alpha =
      sensor.response_time_s > 0.0 ? 1.0 - std::exp(-dt / sensor.response_time_s) : 1.0;

  // Nodes in id order so that output is sorted by (t, node id).
  std::vector<NodeLayout> nodes = scenario.topology.nodes();
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeLayout& a, const NodeLayout& b) { return a.id < b.id; });

  struct NodeState {
    RandomStream noise;
    double lagged = 0.0;
    double airflow_gain = 1.0;
    double gust_phase = 0.0;
  };
  std::vector<NodeState> state;
  for (const auto& n : nodes) {
    RandomStream traits(derive_seed(scenario.seed, 0x2000 + n.id));
    NodeState st{RandomStream(derive_seed(scenario.seed, 0x1000 + n.id))};
    st.airflow_gain = 0.85 + 0.3 * traits.uniform();
    st.gust_phase = 2.0 * kPi * traits.uniform();
    state.push_back(std::move(st));
  }

  // Forced airflow reaches each node when the front, moving at the flow
  // speed, passes its position.
  std::vector<std::vector<double>> arrival(scenario.interference.size(),
                                           std::vector<double>(nodes.size(), 0.0));
  for (std::size_t e = 0; e < scenario.interference.size(); ++e) {
    const auto& ev = scenario.interference[e];
    const double speed = norm(ev.wind);
    if (ev.kind != InterferenceKind::airflow || speed <= 0.0) continue;
    const Vec3 dir = (1.0 / speed) * ev.wind;
    double first = std::numeric_limits<double>::infinity();
    for (const auto& n : nodes) first = std::min(first, dot(n.position, dir));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      arrival[e][i] = (dot(nodes[i].position, dir) - first) / speed;
    }
  }

  constexpr double kGustAmplitude = 0.05;
  constexpr double kGustPeriod = 10.0;

  std::vector<Sample> out;
  const std::size_t ticks = tick_count(scenario);
  out.reserve(ticks * nodes.size());
  for (std::size_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec3 wind = field.wind_at(t);
    const double temp = field.temperature_at(t);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto& st = state[i];
      const double c = field.concentration(nodes[i].position, t, wind);
      st.lagged += lag_alpha * (c - st.lagged);
      double v = sensor_reading(sensor, st.lagged, temp, t, st.noise);

      for (std::size_t e = 0; e < scenario.interference.size(); ++e) {
        const auto& ev = scenario.interference[e];
        if (ev.kind == InterferenceKind::airflow) {
          const double env = envelope(t - ev.start_t - arrival[e][i], ev.duration);
          if (env > 0.0) {
            const double gust =
                1.0 + kGustAmplitude * std::sin(2.0 * kPi * t / kGustPeriod + st.gust_phase);
            v -= sensor.airflow_coeff * norm(ev.wind) * st.airflow_gain * env * gust;
          }
        } else if (ev.kind == InterferenceKind::shake && ev.node == nodes[i].id) {
          v += ev.amplitude * shake_pulse(t - ev.start_t);
        }
      }
      out.push_back({nodes[i].id, t, std::max(0.0, v)});
    }
  }
  return out;
}

}  // namespace gasdetect
