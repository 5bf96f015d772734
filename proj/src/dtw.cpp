#include "gasdetect/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gasdetect/error.hpp"

namespace gasdetect {

namespace {
constexpr double kFlatRange = 1e-9;
}

std::vector<double> normalize(std::span<const double> series) {
  if (series.empty()) throw DataError("normalize: empty series");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(series.size(), 0.0);
  if (range < kFlatRange) return out;
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - min) / range;
  return out;
}

WarpResult dtw_distance(std::span<const double> q, std::span<const double> c, int p) {
  if (q.empty() || c.empty()) throw DataError("dtw_distance: empty series");
  if (p < 1) throw ConfigError("dtw_distance: p must be >= 1");

  const std::size_t m = q.size();
  const std::size_t n = c.size();
  struct Cell {
    double cost;
    std::size_t length;
  };
  constexpr Cell kUnreachable{std::numeric_limits<double>::infinity(), 0};
  auto better = [](const Cell& a, const Cell& b) {
    return a.cost < b.cost || (a.cost == b.cost && a.length < b.length);
  };

  // Two rolling rows of the (m+1) x (n+1) accumulated-cost matrix with an
  // infinite border; the origin border cell is the empty-prefix zero.
  std::vector<Cell> prev(n + 1, kUnreachable);
  std::vector<Cell> cur(n + 1, kUnreachable);
  prev[0] = {0.0, 0};
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = kUnreachable;
    for (std::size_t j = 1; j <= n; ++j) {
      Cell best = prev[j - 1];
      if (better(prev[j], best)) best = prev[j];
      if (better(cur[j - 1], best)) best = cur[j - 1];
      cur[j] = {best.cost + std::abs(q[i - 1] - c[j - 1]), best.length + 1};
    }
    std::swap(prev, cur);
  }
  return {prev[n].cost, prev[n].length};
}

}  // namespace gasdetect
