#pragma once

// Min-max normalization and unconstrained dynamic time warping.

#include <cstddef>
#include <span>
#include <vector>

namespace gasdetect {

struct WarpResult {
  double distance = 0.0;
  std::size_t path_length = 0;  // cells on the optimal path, max(m,n) <= l <= m+n-1
};

// Affine map onto [0, 1]. A range below 1e-9 maps to all zeros.
// Throws DataError on empty input.
std::vector<double> normalize(std::span<const double> series);

// Minimum total local cost over all monotone, continuous warping paths from
// (0,0) to (m-1,n-1), steps (1,0), (0,1), (1,1). Local cost is |q_i - c_j|; for
// scalar samples every p-norm reduces to that, so `p` is only validated.
// Among equal-cost paths the shortest one defines path_length.
// Throws DataError on empty input, ConfigError when p < 1.
WarpResult dtw_distance(std::span<const double> q, std::span<const double> c, int p = 1);

}  // namespace gasdetect
