#pragma once

// Node-side moving-average smoothing. Each node keeps the last N raw values and
// transmits their arithmetic mean; before N values have arrived the mean is over
// what has been seen so far.

#include <cstddef>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "gasdetect/model.hpp"

namespace gasdetect {

struct FilterState {
  std::size_t window = 5;
  std::deque<double> buffer;  // oldest first, size <= window

  explicit FilterState(std::size_t window_n);
};

// Pure transition: push `raw`, evict the oldest value when full, emit the mean.
// Summation runs oldest to newest so results are bit-reproducible.
std::pair<FilterState, Sample> filter_step(FilterState state, const Sample& raw);

// Filters a log that may interleave several nodes; one state per node, output
// order matches input order.
std::vector<Sample> filter_log(std::span<const Sample> raw, std::size_t window_n);

}  // namespace gasdetect
