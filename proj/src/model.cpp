#include "gasdetect/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

double distance(Vec3 a, Vec3 b) { return norm(a - b); }

std::string_view to_string(Layer layer) {
  return layer == Layer::ground ? "ground" : "elevated";
}

Layer layer_for_height(double z) { return z == 0.0 ? Layer::ground : Layer::elevated; }

Topology::Topology(std::vector<NodeLayout> nodes, double neighbor_radius_m)
    : nodes_(std::move(nodes)), radius_(neighbor_radius_m) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw ConfigError(fmt::format("neighbor radius must be positive, got {}", radius_));
  }
  std::unordered_set<NodeId> ids;
  for (const auto& n : nodes_) {
    if (!ids.insert(n.id).second) {
      throw ConfigError(fmt::format("duplicate node id {}", n.id));
    }
    const auto& p = n.position;
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) || p.z < 0.0) {
      throw ConfigError(fmt::format("node {} has an invalid position", n.id));
    }
    if (n.layer != layer_for_height(p.z)) {
      throw ConfigError(fmt::format("node {}: layer must be ground iff z == 0", n.id));
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
      if (nodes_[i].position == nodes_[j].position) {
        throw ConfigError(fmt::format("nodes {} and {} share a position", nodes_[i].id,
                                      nodes_[j].id));
      }
    }
  }

  neighbors_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (i != j && distance(nodes_[i].position, nodes_[j].position) <= radius_) {
        neighbors_[i].push_back(nodes_[j].id);
      }
    }
    std::sort(neighbors_[i].begin(), neighbors_[i].end());
  }
}

std::size_t Topology::index_of(NodeId id) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(),
                         [id](const NodeLayout& n) { return n.id == id; });
  if (it == nodes_.end()) {
    throw ConfigError(fmt::format("unknown node id {}", id));
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool Topology::contains(NodeId id) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [id](const NodeLayout& n) { return n.id == id; });
}

const NodeLayout& Topology::node(NodeId id) const { return nodes_[index_of(id)]; }

std::optional<NodeId> Topology::find_label(std::string_view label) const {
  for (const auto& n : nodes_) {
    if (n.label == label) return n.id;
  }
  return std::nullopt;
}

std::string Topology::name(NodeId id) const {
  const auto& n = node(id);
  return n.label.empty() ? std::to_string(n.id) : n.label;
}

const std::vector<NodeId>& Topology::neighbors(NodeId id) const {
  return neighbors_[index_of(id)];
}

std::vector<NodeId> neighbors(const Topology& topology, NodeId id) {
  return topology.neighbors(id);
}

Topology grid12_topology(double neighbor_radius_m) {
  struct Column {
    char name;
    double x;
    double y;
  };
  constexpr Column columns[] = {{'A', 0, 0}, {'B', 2, 0}, {'C', 4, 0},
                                {'D', 4, 2}, {'E', 2, 2}, {'F', 0, 2}};
  std::vector<NodeLayout> nodes;
  for (int layer = 0; layer < 2; ++layer) {
    const double z = layer == 0 ? 0.0 : 0.5;
    for (const auto& c : columns) {
      NodeLayout n;
      n.id = static_cast<NodeId>(nodes.size());
      n.label = fmt::format("{}{}", c.name, layer);
      n.position = {c.x, c.y, z};
      n.layer = layer_for_height(z);
      nodes.push_back(std::move(n));
    }
  }
  return Topology(std::move(nodes), neighbor_radius_m);
}

void DetectorConfig::validate() const {
  auto fail = [](const char* what) { throw ConfigError(what); };
  if (filter_window == 0) fail("filter_window must be a positive integer");
  if (extremum_radius == 0) fail("extremum_radius must be a positive integer");
  if (!(trend_tolerance > 1.0)) fail("trend_tolerance must be > 1");
  if (!(slope_threshold > 0.0)) fail("slope_threshold must be positive");
  if (dtw_norm_order < 1) fail("dtw_norm_order must be a positive integer");
  if (!(global_dtw_threshold > 0.0)) fail("global_dtw_threshold must be positive");
  if (!(local_dtw_threshold > 0.0)) fail("local_dtw_threshold must be positive");
  if (!(global_quorum > 0.0 && global_quorum <= 1.0)) fail("global_quorum must be in (0, 1]");
  if (!(periodicity_window_s > 0.0)) fail("periodicity_window_s must be positive");
  if (periodicity_count < 2) fail("periodicity_count must be >= 2");
  if (!(history_s > 0.0)) fail("history_s must be positive");
  if (!(flat_range > 0.0)) fail("flat_range must be positive");
  if (!(global_amplitude_ratio >= 0.0 && global_amplitude_ratio <= 1.0)) {
    fail("global_amplitude_ratio must be in [0, 1]");
  }
}

}  // namespace gasdetect
