#pragma once

// Shared domain types: samples, node layout, topology, detector configuration.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gasdetect {

using NodeId = std::uint32_t;

// One timestamped reading. Raw (pre-filter) and filtered samples share this type.
struct Sample {
  NodeId node_id = 0;
  double t = 0.0;      // seconds
  double value = 0.0;  // sensor units

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 v);
double distance(Vec3 a, Vec3 b);

enum class Layer { ground, elevated };

std::string_view to_string(Layer layer);

struct NodeLayout {
  NodeId id = 0;
  std::string label;  // e.g. "C0"; may be empty
  Vec3 position;
  Layer layer = Layer::ground;
};

// Layer implied by height: ground iff z == 0.
Layer layer_for_height(double z);

// Node set plus the Euclidean "nearby" relation used by the spatial check.
// Neighbor lists are computed once at construction.
class Topology {
 public:
  Topology(std::vector<NodeLayout> nodes, double neighbor_radius_m);

  const std::vector<NodeLayout>& nodes() const { return nodes_; }
  double neighbor_radius() const { return radius_; }
  std::size_t size() const { return nodes_.size(); }

  bool contains(NodeId id) const;
  const NodeLayout& node(NodeId id) const;
  std::optional<NodeId> find_label(std::string_view label) const;
  // Label if set, otherwise the numeric id.
  std::string name(NodeId id) const;

  // All other nodes within neighbor_radius (3D), sorted by id.
  const std::vector<NodeId>& neighbors(NodeId id) const;

 private:
  std::size_t index_of(NodeId id) const;

  std::vector<NodeLayout> nodes_;
  double radius_;
  std::vector<std::vector<NodeId>> neighbors_;
};

// Free-function form of Topology::neighbors.
std::vector<NodeId> neighbors(const Topology& topology, NodeId id);

// Twelve nodes in two layers (z = 0 and z = 0.5 m) over a 2 m grid:
//
//   F(0,2)  E(2,2)  D(4,2)
//   A(0,0)  B(2,0)  C(4,0)
//
// Ids 0..5 are A0..F0, ids 6..11 are A1..F1.
Topology grid12_topology(double neighbor_radius_m = 2.1);

struct DetectorConfig {
  std::size_t filter_window = 5;        // moving-average length N (samples)
  std::size_t extremum_radius = 3;      // a, in samples
  double trend_tolerance = 1.5;         // w > 1
  double slope_threshold = 0.6;         // k_th, sensor units per second
  int dtw_norm_order = 1;               // p
  double global_dtw_threshold = 0.3;    // tau_g, on normalized series
  double local_dtw_threshold = 0.3;     // tau_l
  double global_quorum = 0.8;           // q in (0, 1]
  double periodicity_window_s = 60.0;   // H
  std::size_t periodicity_count = 3;    // r >= 2
  double history_s = 300.0;             // sink-side rolling buffer per node
  double flat_range = 1.5;              // sensor units; windows with a smaller range normalize to zeros
  double global_amplitude_ratio = 0.3;  // peers moving less than this share of the anomaly's range
                                        // never count as globally correlated

  // Throws ConfigError on any out-of-range field.
  void validate() const;
};

}  // namespace gasdetect
