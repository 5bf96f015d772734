#pragma once

// Sink-side key-point segmentation of a node's filtered series.
//
//   extract_extrema  windowed local minima/maxima plus both endpoints
//   optimize_trend   drops junctions whose slope ratio stays within [1/w, w]
//   segment_series   cuts the series at the start of every rising trend
//   flag_anomaly     peak |slope| > k_th marks the segment anomalous

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gasdetect/model.hpp"

namespace gasdetect {

enum class ExtremumKind { min, max, endpoint };

struct ExtremePoint {
  double value = 0.0;
  double t = 0.0;
  ExtremumKind kind = ExtremumKind::endpoint;
  std::size_t index = 0;  // position in the source series
};

struct KeyPoint {
  double value = 0.0;
  double t = 0.0;
  std::optional<double> slope_out;  // absent on the last point
  std::size_t index = 0;            // position in the source series
};

struct Segment {
  NodeId node_id = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<Sample> samples;  // [t_start, t_end), last segment of a series includes t_end
  std::vector<KeyPoint> key_points;
  bool anomalous = false;
  double peak_abs_slope = 0.0;
};

// Throws DataError on an empty series or non-increasing timestamps,
// ConfigError when radius == 0.
std::vector<ExtremePoint> extract_extrema(std::span<const Sample> series, std::size_t radius);

// Throws DataError for fewer than 2 points or non-increasing timestamps,
// ConfigError when tolerance <= 1.
std::vector<KeyPoint> optimize_trend(std::span<const ExtremePoint> extrema, double tolerance);

std::vector<Segment> segment_series(std::span<const Sample> series,
                                    std::span<const KeyPoint> key_points);

Segment flag_anomaly(Segment segment, double slope_threshold);

// Full chain with the detector's radius and tolerance; segments come back flagged.
std::vector<Segment> segment_and_flag(std::span<const Sample> series, const DetectorConfig& cfg);

// CSV rows `node_id,t,value,slope` (slope empty on the final point).
void write_key_points_csv(std::ostream& out, NodeId node, std::span<const KeyPoint> key_points,
                          bool header = true);

}  // namespace gasdetect
