#include "gasdetect/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "gasdetect/error.hpp"

namespace gasdetect {

namespace {

template <typename Points>
void require_increasing(const Points& pts, const char* what) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].t > pts[i - 1].t)) {
      throw DataError(fmt::format("{}: timestamps must be strictly increasing (index {})", what, i));
    }
  }
}

// Ratio test between the incoming and outgoing slope at one junction.
bool junction_retained(double in, double out, double tolerance) {
  if (in == 0.0 && out == 0.0) return false;
  if (in == 0.0 || out == 0.0) return true;
  const double ratio = out / in;
  return ratio > tolerance || ratio < 1.0 / tolerance;
}

}  // namespace

std::vector<ExtremePoint> extract_extrema(std::span<const Sample> series, std::size_t radius) {
  if (series.empty()) throw DataError("extract_extrema: empty series");
  if (radius == 0) throw ConfigError("extract_extrema: radius must be >= 1");
  require_increasing(series, "extract_extrema");

  const std::size_t n = series.size();
  std::vector<ExtremePoint> out;
  out.push_back({series[0].value, series[0].t, ExtremumKind::endpoint, 0});

  // A flat run of equal values contributes at most one interior extremum, at the
  // earliest index of the run that qualifies.
  std::size_t run_start = 0;
  std::optional<std::size_t> emitted_run;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = series[i].value;
    if (x != series[i - 1].value) run_start = i;

    const std::size_t lo = i >= radius ? i - radius : 0;
    const std::size_t hi = std::min(n - 1, i + radius);
    bool is_max = true;
    bool is_min = true;
    bool differs = false;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double v = series[j].value;
      if (v > x) is_max = false;
      if (v < x) is_min = false;
      if (v != x) differs = true;
    }
    if (!differs || !(is_max || is_min)) continue;
    if (emitted_run == run_start) continue;
    emitted_run = run_start;
    out.push_back({x, series[i].t, is_max ? ExtremumKind::max : ExtremumKind::min, i});
  }

  if (n > 1) out.push_back({series[n - 1].value, series[n - 1].t, ExtremumKind::endpoint, n - 1});
  return out;
}

std::vector<KeyPoint> optimize_trend(std::span<const ExtremePoint> extrema, double tolerance) {
  if (extrema.size() < 2) throw DataError("optimize_trend: need at least 2 points");
  if (!(tolerance > 1.0)) throw ConfigError("optimize_trend: tolerance must be > 1");
  require_increasing(extrema, "optimize_trend");

  auto slope = [](const auto& a, const auto& b) { return (b.value - a.value) / (b.t - a.t); };

  std::vector<KeyPoint> kept;
  kept.push_back({extrema.front().value, extrema.front().t, std::nullopt, extrema.front().index});
  for (std::size_t j = 1; j + 1 < extrema.size(); ++j) {
    const double in = slope(extrema[j - 1], extrema[j]);
    const double out = slope(extrema[j], extrema[j + 1]);
    if (junction_retained(in, out, tolerance)) {
      kept.push_back({extrema[j].value, extrema[j].t, std::nullopt, extrema[j].index});
    }
  }
  kept.push_back({extrema.back().value, extrema.back().t, std::nullopt, extrema.back().index});

  for (std::size_t i = 0; i + 1 < kept.size(); ++i) kept[i].slope_out = slope(kept[i], kept[i + 1]);
  return kept;
}

std::vector<Segment> segment_series(std::span<const Sample> series,
                                    std::span<const KeyPoint> key_points) {
  std::vector<Segment> segments;
  if (series.empty()) return segments;

  std::vector<double> bounds{series.front().t};
  for (std::size_t j = 1; j < key_points.size(); ++j) {
    const auto& prev = key_points[j - 1].slope_out;
    const auto& cur = key_points[j].slope_out;
    if (cur && *cur > 0.0 && prev && *prev <= 0.0 && key_points[j].t > bounds.back()) {
      bounds.push_back(key_points[j].t);
    }
  }

  const NodeId node = series.front().node_id;
  const double t_last = series.back().t;
  auto sample_it = series.begin();
  auto key_it = key_points.begin();
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    const bool last = b + 1 == bounds.size();
    const double t_end = last ? t_last : bounds[b + 1];
    auto in_range = [&](double t) { return last ? t <= t_end : t < t_end; };

    Segment seg;
    seg.node_id = node;
    seg.t_start = bounds[b];
    seg.t_end = t_end;
    for (; sample_it != series.end() && in_range(sample_it->t); ++sample_it) {
      seg.samples.push_back(*sample_it);
    }
    for (; key_it != key_points.end() && in_range(key_it->t); ++key_it) {
      if (key_it->t < seg.t_start) continue;
      seg.key_points.push_back(*key_it);
      if (key_it->slope_out) {
        seg.peak_abs_slope = std::max(seg.peak_abs_slope, std::abs(*key_it->slope_out));
      }
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

Segment flag_anomaly(Segment segment, double slope_threshold) {
  segment.anomalous = segment.peak_abs_slope > slope_threshold;
  return segment;
}

std::vector<Segment> segment_and_flag(std::span<const Sample> series, const DetectorConfig& cfg) {
  if (series.empty()) return {};
  const auto extrema = extract_extrema(series, cfg.extremum_radius);
  if (extrema.size() < 2) {
    return {flag_anomaly(segment_series(series, {}).front(), cfg.slope_threshold)};
  }
  const auto keys = optimize_trend(extrema, cfg.trend_tolerance);
  auto segments = segment_series(series, keys);
  for (auto& s : segments) s = flag_anomaly(std::move(s), cfg.slope_threshold);
  return segments;
}

void write_key_points_csv(std::ostream& out, NodeId node, std::span<const KeyPoint> key_points,
                          bool header) {
  if (header) out << "node_id,t,value,slope\n";
  for (const auto& k : key_points) {
    out << fmt::format("{},{:.6f},{:.6f},", node, k.t, k.value);
    if (k.slope_out) out << fmt::format("{:.6f}", *k.slope_out);
    out << '\n';
  }
}

}  // namespace gasdetect
