#pragma once

// Sink-side judgment engine.
//
// Every node has a NodeHistory that buffers its filtered stream and re-segments
// the open tail on each sample. Anomalous segments go through a fixed decision
// order:
//
//   1. global correlation  - the same normalized shape, at a comparable
//                            amplitude, on a quorum of all other nodes means
//                            an environmental cause; no alarm.
//   2. periodicity         - r or more anomalies on this node within H seconds.
//   3. spatial correlation - an overlapping anomaly of similar shape on a
//                            neighbor.
//
// (2) or (3) yields a DiffusionSource verdict, otherwise Watch.

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "gasdetect/model.hpp"
#include "gasdetect/segmentation.hpp"

namespace gasdetect {

class NodeHistory {
 public:
  explicit NodeHistory(NodeId id) : id_(id) {}

  NodeId node_id() const { return id_; }

  // Appends one filtered sample and returns the segments that became reportable:
  // a segment is reported once its closing rising-trend boundary is confirmed,
  // or earlier, as soon as confirmed key points already exceed the slope
  // threshold. Each segment is reported at most once.
  // Throws DataError when sample.t does not advance or the node id differs.
  std::vector<Segment> ingest(const Sample& sample, const DetectorConfig& cfg);

  const std::deque<Sample>& buffer() const { return buffer_; }
  // Buffered values with t in [t0, t1].
  std::vector<double> values_between(double t0, double t1) const;

  // Reported anomalous segments still inside the history window.
  const std::vector<Segment>& anomalous_segments() const { return anomalies_; }

  // Times of anomalies that were not explained as environmental, trimmed to H.
  const std::deque<double>& recent_anomalies() const { return recent_; }
  void record_anomaly(double t, const DetectorConfig& cfg);

 private:
  void remember(const Segment& segment, const DetectorConfig& cfg);

  NodeId id_;
  std::deque<Sample> buffer_;
  double scan_start_ = 0.0;  // first sample of the open segment
  bool open_reported_ = false;
  std::vector<Segment> anomalies_;
  std::deque<double> recent_;
};

using HistoryMap = std::map<NodeId, NodeHistory>;
using Evidence = std::map<NodeId, double>;

// Length-normalized DTW between two windows after min-max scaling. A window
// whose range is below cfg.flat_range is scaled to all zeros.
double shape_distance(std::span<const double> a, std::span<const double> b,
                      const DetectorConfig& cfg);

// A peer counts when its range over the anomaly window is at least
// cfg.global_amplitude_ratio times the anomaly's range and its shape distance is
// below the global threshold. Peers with too little overlapping data are left
// out; fewer than two usable peers gives false.
bool global_correlation_check(const Segment& anomaly, const HistoryMap& histories,
                              const DetectorConfig& cfg, Evidence* evidence = nullptr);

bool periodicity_check(const NodeHistory& history, const DetectorConfig& cfg);

bool spatial_correlation_check(const Segment& anomaly,
                               std::span<const NodeHistory* const> neighbor_histories,
                               const DetectorConfig& cfg, Evidence* evidence = nullptr);

enum class JudgmentKind { environmental_change, diffusion_source, watch };
enum class Trigger { none, periodicity, spatial };

std::string_view to_string(JudgmentKind kind);
std::string_view to_string(Trigger trigger);

struct Judgment {
  JudgmentKind kind = JudgmentKind::watch;
  NodeId node_id = 0;
  Trigger trigger = Trigger::none;  // set only for diffusion_source
  double t = 0.0;                   // sink time of the verdict (never before the segment end)
  double t_start = 0.0;             // segment start
  Evidence global_evidence;
  Evidence local_evidence;

  bool is_alarm() const { return kind == JudgmentKind::diffusion_source; }
};

// Shared sink state: one history per topology node.
class Sink {
 public:
  Sink(Topology topology, DetectorConfig cfg);

  // Throws DataError for unknown nodes or out-of-order samples.
  std::vector<Segment> ingest(const Sample& sample);

  // Requires anomaly.anomalous. Non-environmental anomalies are recorded in the
  // node's periodicity history whatever the verdict, stamped with the verdict
  // time: the latest ingested sample time, or the segment end if later.
  Judgment judge(const Segment& anomaly);

  const Topology& topology() const { return topology_; }
  const DetectorConfig& config() const { return cfg_; }
  const HistoryMap& histories() const { return histories_; }
  const NodeHistory& history(NodeId id) const;

 private:
  Topology topology_;
  DetectorConfig cfg_;
  HistoryMap histories_;
  double now_ = 0.0;
};

// `t,kind,node_id,trigger,min_global_dtw,min_local_dtw`
void write_alarm_log(std::ostream& out, std::span<const Judgment> judgments, bool header = true);

}  // namespace gasdetect
