#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace gasdetect::fixture {

namespace {

constexpr int kDuration = 120;

double ramp(double t, double t0, double rise_s, double height) {
  return height * std::clamp((t - t0) / rise_s, 0.0, 1.0);
}

double triangle(double t, double centre, double half_width, double height) {
  return height * std::max(0.0, 1.0 - std::abs(t - centre) / half_width);
}

std::vector<Sample> build(const std::function<double(NodeId, double)>& value) {
  const auto topo = grid12_topology();
  std::vector<Sample> out;
  for (int k = 0; k <= kDuration; ++k) {
    for (const auto& n : topo.nodes()) {
      const double t = k;
      out.push_back({n.id, t, value(n.id, t)});
    }
  }
  return out;
}

}  // namespace

std::vector<Sample> environmental_ramp() {
  return build([](NodeId id, double t) {
    return 100.0 + ramp(t, 40.0, 20.0, 20.0 + 0.5 * id);
  });
}

std::vector<Sample> triple_spike() {
  return build([](NodeId id, double t) {
    if (id != 1) return 100.0;
    double v = 100.0;
    for (double c : {30.0, 50.0, 70.0}) v += triangle(t, c, 4.0, 12.0);
    return v;
  });
}

std::vector<Sample> vertical_pair() {
  return build([](NodeId id, double t) {
    if (id != 0 && id != 6) return 100.0;
    return 100.0 + ramp(t, 40.0, 10.0, id == 0 ? 15.0 : 12.0);
  });
}

std::vector<Sample> identical_everywhere(unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> wave(kDuration + 1);
  double level = 100.0;
  for (auto& w : wave) {
    level += u(gen);
    w = level;
  }
  return build([wave](NodeId, double t) { return wave[static_cast<std::size_t>(t)]; });
}

}  // namespace gasdetect::fixture
