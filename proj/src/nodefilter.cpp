#include "gasdetect/nodefilter.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

FilterState::FilterState(std::size_t window_n) : window(window_n) {
  if (window_n == 0) throw ConfigError("filter window must be positive");
}

std::pair<FilterState, Sample> filter_step(FilterState state, const Sample& raw) {
  if (!std::isfinite(raw.value)) {
    throw DataError(fmt::format("node {}: non-finite sample at t={}", raw.node_id, raw.t));
  }
  state.buffer.push_back(raw.value);
  if (state.buffer.size() > state.window) state.buffer.pop_front();

  double sum = 0.0;
  for (double v : state.buffer) sum += v;
  Sample out = raw;
  out.value = sum / static_cast<double>(state.buffer.size());
  return {std::move(state), out};
}

std::vector<Sample> filter_log(std::span<const Sample> raw, std::size_t window_n) {
  std::map<NodeId, FilterState> states;
  std::vector<Sample> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    auto it = states.try_emplace(s.node_id, window_n).first;
    auto [next, filtered] = filter_step(std::move(it->second), s);
    it->second = std::move(next);
    out.push_back(filtered);
  }
  return out;
}

}  // namespace gasdetect
