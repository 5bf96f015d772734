#include "gasdetect/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "gasdetect/dtw.hpp"
#include "gasdetect/error.hpp"

namespace gasdetect {

namespace {

std::vector<double> values_of(std::span<const Sample> samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.value);
  return v;
}

double range_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

bool is_flat(std::span<const double> v, double flat_range) { return range_of(v) < flat_range; }

std::vector<double> shape_of(std::span<const double> v, double flat_range) {
  if (is_flat(v, flat_range)) return std::vector<double>(v.size(), 0.0);
  return normalize(v);
}

bool overlaps(const Segment& a, const Segment& b) {
  return a.t_start <= b.t_end && b.t_start <= a.t_end;
}

std::optional<double> min_evidence(const Evidence& e) {
  if (e.empty()) return std::nullopt;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [id, d] : e) m = std::min(m, d);
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// NodeHistory

std::vector<Segment> NodeHistory::ingest(const Sample& sample, const DetectorConfig& cfg) {
  if (sample.node_id != id_) {
    throw DataError(fmt::format("history for node {} got a sample from node {}", id_,
                                sample.node_id));
  }
  if (!buffer_.empty() && !(sample.t > buffer_.back().t)) {
    throw DataError(fmt::format("node {}: out-of-order sample at t={} (last t={})", id_,
                                sample.t, buffer_.back().t));
  }
  if (!std::isfinite(sample.value)) {
    throw DataError(fmt::format("node {}: non-finite value at t={}", id_, sample.t));
  }
  if (buffer_.empty()) scan_start_ = sample.t;
  buffer_.push_back(sample);
  while (buffer_.front().t < sample.t - cfg.history_s) buffer_.pop_front();
  if (scan_start_ < buffer_.front().t) {
    // The open segment outgrew the history; restart it at the oldest sample.
    scan_start_ = buffer_.front().t;
    open_reported_ = false;
  }
  std::erase_if(anomalies_,
                [&](const Segment& s) { return s.t_end < sample.t - cfg.history_s; });

  std::vector<Segment> reported;
  const std::size_t radius = cfg.extremum_radius;
  for (;;) {
    auto first = std::lower_bound(buffer_.begin(), buffer_.end(), scan_start_,
                                  [](const Sample& s, double t) { return s.t < t; });
    const std::vector<Sample> window(first, buffer_.end());
    const std::size_t n = window.size();
    if (n < 2) break;

    const auto extrema = extract_extrema(window, radius);
    const auto keys = optimize_trend(extrema, cfg.trend_tolerance);
    const auto segments = segment_series(window, keys);

    // Extrema at or before `limit` have a complete window and cannot change.
    const bool any_confirmed = n - 1 >= radius;
    const std::size_t limit = any_confirmed ? n - 1 - radius : 0;
    auto confirmed = [&](std::size_t index) {
      return index == 0 || (any_confirmed && index <= limit && index != n - 1);
    };

    if (segments.size() >= 2) {
      // The boundary key point and the input extremum after it must both be
      // confirmed; only then is its retention and outgoing slope sign final.
      const double boundary_t = segments[1].t_start;
      auto key = std::find_if(keys.begin(), keys.end(),
                              [&](const KeyPoint& k) { return k.t == boundary_t; });
      auto ext = std::find_if(extrema.begin(), extrema.end(),
                              [&](const ExtremePoint& e) { return e.index == key->index; });
      const bool final_boundary = confirmed(key->index) && std::next(ext) != extrema.end() &&
                                  confirmed(std::next(ext)->index);
      if (final_boundary) {
        Segment done = flag_anomaly(segments[0], cfg.slope_threshold);
        if (!open_reported_) {
          if (done.anomalous) remember(done, cfg);
          reported.push_back(std::move(done));
        } else {
          // Already reported early; refresh the stored copy with the full segment.
          for (auto& a : anomalies_) {
            if (a.t_start == done.t_start) {
              a.t_end = done.t_end;
              a.samples = done.samples;
              a.key_points = done.key_points;
              a.peak_abs_slope = std::max(a.peak_abs_slope, done.peak_abs_slope);
            }
          }
        }
        scan_start_ = boundary_t;
        open_reported_ = false;
        continue;
      }
    }

    if (!open_reported_) {
      const Segment& open = segments[0];
      double peak = 0.0;
      for (std::size_t i = 0; i + 1 < open.key_points.size(); ++i) {
        const auto& a = open.key_points[i];
        const auto& b = open.key_points[i + 1];
        if (confirmed(a.index) && confirmed(b.index) && a.slope_out) {
          peak = std::max(peak, std::abs(*a.slope_out));
        }
      }
      if (peak > cfg.slope_threshold) {
        Segment early;
        early.node_id = id_;
        early.t_start = open.t_start;
        early.t_end = sample.t;
        early.samples = window;
        early.key_points = open.key_points;
        early.peak_abs_slope = peak;
        early.anomalous = true;
        remember(early, cfg);
        reported.push_back(std::move(early));
        open_reported_ = true;
      }
    }
    break;
  }
  return reported;
}

void NodeHistory::remember(const Segment& segment, const DetectorConfig&) {
  anomalies_.push_back(segment);
}

std::vector<double> NodeHistory::values_between(double t0, double t1) const {
  std::vector<double> out;
  auto it = std::lower_bound(buffer_.begin(), buffer_.end(), t0,
                             [](const Sample& s, double t) { return s.t < t; });
  for (; it != buffer_.end() && it->t <= t1; ++it) out.push_back(it->value);
  return out;
}

void NodeHistory::record_anomaly(double t, const DetectorConfig& cfg) {
  recent_.push_back(t);
  while (!recent_.empty() && t - recent_.front() > cfg.periodicity_window_s) recent_.pop_front();
}

// ---------------------------------------------------------------------------
// Checks

double shape_distance(std::span<const double> a, std::span<const double> b,
                      const DetectorConfig& cfg) {
  const auto na = shape_of(a, cfg.flat_range);
  const auto nb = shape_of(b, cfg.flat_range);
  const auto warp = dtw_distance(na, nb, cfg.dtw_norm_order);
  return warp.distance / static_cast<double>(std::max(na.size(), nb.size()));
}

bool global_correlation_check(const Segment& anomaly, const HistoryMap& histories,
                              const DetectorConfig& cfg, Evidence* evidence) {
  const auto own = values_of(anomaly.samples);
  if (own.empty()) return false;
  const std::size_t min_overlap = std::max<std::size_t>(2, own.size() / 2);
  // Peers that moved much less than this node are not sharing its anomaly.
  const double min_range = cfg.global_amplitude_ratio * range_of(own);

  std::size_t with_data = 0;
  std::size_t correlated = 0;
  for (const auto& [id, history] : histories) {
    if (id == anomaly.node_id) continue;
    const auto peer = history.values_between(anomaly.t_start, anomaly.t_end);
    if (peer.size() < min_overlap) continue;
    ++with_data;
    const double d = shape_distance(own, peer, cfg);
    if (evidence) (*evidence)[id] = d;
    if (range_of(peer) >= min_range && d < cfg.global_dtw_threshold) ++correlated;
  }
  if (with_data < 2) return false;
  return static_cast<double>(correlated) >= cfg.global_quorum * static_cast<double>(with_data);
}

bool periodicity_check(const NodeHistory& history, const DetectorConfig& cfg) {
  const auto& recent = history.recent_anomalies();
  if (recent.empty()) return false;
  const double now = recent.back();
  const auto count = std::count_if(recent.begin(), recent.end(), [&](double t) {
    return now - t <= cfg.periodicity_window_s;
  });
  return static_cast<std::size_t>(count) >= cfg.periodicity_count;
}

bool spatial_correlation_check(const Segment& anomaly,
                               std::span<const NodeHistory* const> neighbor_histories,
                               const DetectorConfig& cfg, Evidence* evidence) {
  const auto own = values_of(anomaly.samples);
  if (own.empty()) return false;
  bool found = false;
  for (const NodeHistory* h : neighbor_histories) {
    if (h->node_id() == anomaly.node_id) continue;
    for (const auto& other : h->anomalous_segments()) {
      if (!other.anomalous || !overlaps(anomaly, other) || other.samples.empty()) continue;
      const double d = shape_distance(own, values_of(other.samples), cfg);
      if (evidence) {
        auto [it, inserted] = evidence->try_emplace(h->node_id(), d);
        if (!inserted) it->second = std::min(it->second, d);
      }
      if (d < cfg.local_dtw_threshold) found = true;
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Sink

std::string_view to_string(JudgmentKind kind) {
  switch (kind) {
    case JudgmentKind::environmental_change: return "EnvironmentalChange";
    case JudgmentKind::diffusion_source: return "DiffusionSource";
    case JudgmentKind::watch: return "Watch";
  }
  return "?";
}

std::string_view to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::none: return "";
    case Trigger::periodicity: return "periodicity";
    case Trigger::spatial: return "spatial";
  }
  return "?";
}

Sink::Sink(Topology topology, DetectorConfig cfg)
    : topology_(std::move(topology)), cfg_(cfg) {
  cfg_.validate();
  for (const auto& n : topology_.nodes()) histories_.emplace(n.id, NodeHistory(n.id));
}

const NodeHistory& Sink::history(NodeId id) const {
  auto it = histories_.find(id);
  if (it == histories_.end()) throw DataError(fmt::format("unknown node id {}", id));
  return it->second;
}

std::vector<Segment> Sink::ingest(const Sample& sample) {
  auto it = histories_.find(sample.node_id);
  if (it == histories_.end()) {
    throw DataError(fmt::format("sample from unknown node id {}", sample.node_id));
  }
  auto reported = it->second.ingest(sample, cfg_);
  now_ = std::max(now_, sample.t);
  return reported;
}

Judgment Sink::judge(const Segment& anomaly) {
  if (!anomaly.anomalous) throw ConfigError("judge requires an anomalous segment");
  Judgment j;
  j.node_id = anomaly.node_id;
  j.t = std::max(now_, anomaly.t_end);
  j.t_start = anomaly.t_start;

  if (global_correlation_check(anomaly, histories_, cfg_, &j.global_evidence)) {
    j.kind = JudgmentKind::environmental_change;
    return j;
  }

  auto& own = histories_.at(anomaly.node_id);
  own.record_anomaly(j.t, cfg_);
  if (periodicity_check(own, cfg_)) {
    j.kind = JudgmentKind::diffusion_source;
    j.trigger = Trigger::periodicity;
    return j;
  }

  std::vector<const NodeHistory*> nbrs;
  for (NodeId id : topology_.neighbors(anomaly.node_id)) nbrs.push_back(&histories_.at(id));
  if (spatial_correlation_check(anomaly, nbrs, cfg_, &j.local_evidence)) {
    j.kind = JudgmentKind::diffusion_source;
    j.trigger = Trigger::spatial;
    return j;
  }
  j.kind = JudgmentKind::watch;
  return j;
}

void write_alarm_log(std::ostream& out, std::span<const Judgment> judgments, bool header) {
  if (header) out << "t,kind,node_id,trigger,min_global_dtw,min_local_dtw\n";
  for (const auto& j : judgments) {
    out << fmt::format("{:.3f},{},{},{},", j.t, to_string(j.kind), j.node_id, to_string(j.trigger));
    if (auto g = min_evidence(j.global_evidence)) out << fmt::format("{:.6f}", *g);
    out << ',';
    if (auto l = min_evidence(j.local_evidence)) out << fmt::format("{:.6f}", *l);
    out << '\n';
  }
}

}  // namespace gasdetect
