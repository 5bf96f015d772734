#pragma once

// Independent reference implementations used only by tests.

#include <cstddef>
#include <span>
#include <vector>

#include "gasdetect/dtw.hpp"
#include "gasdetect/model.hpp"
#include "gasdetect/segmentation.hpp"

namespace gasdetect::oracle {

inline constexpr std::size_t kBruteForceCap = 8;

// Enumerates every monotone, continuous path from (0,0) to (m-1,n-1) and sums
// its local costs front to back. Same tie-break as the DP: lowest cost, then
// fewest cells. Throws DataError on empty input or when m or n exceeds the cap.
WarpResult dtw_brute_force(std::span<const double> q, std::span<const double> c, int p = 1);

// Mean of x[i-n+1..i] summed oldest first, recomputed from scratch.
double window_mean(std::span<const double> x, std::size_t i, std::size_t n);

// Retention rule of the trend optimizer for one junction with incoming slope
// s_in and outgoing slope s_out.
bool keeps_junction(double s_in, double s_out, double tolerance);

std::vector<ExtremePoint> as_extrema(std::span<const KeyPoint> keys);

}  // namespace gasdetect::oracle
