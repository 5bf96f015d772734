#include "oracles.hpp"

#include <cmath>
#include <limits>

#include "gasdetect/error.hpp"

namespace gasdetect::oracle {

namespace {

struct Walk {
  std::span<const double> q;
  std::span<const double> c;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_len = 0;

  void from(std::size_t i, std::size_t j, double cost, std::size_t len) {
    cost += std::abs(q[i] - c[j]);
    ++len;
    if (i + 1 == q.size() && j + 1 == c.size()) {
      if (cost < best || (cost == best && len < best_len)) {
        best = cost;
        best_len = len;
      }
      return;
    }
    if (i + 1 < q.size() && j + 1 < c.size()) from(i + 1, j + 1, cost, len);
    if (i + 1 < q.size()) from(i + 1, j, cost, len);
    if (j + 1 < c.size()) from(i, j + 1, cost, len);
  }
};

}  // namespace

WarpResult dtw_brute_force(std::span<const double> q, std::span<const double> c, int p) {
  if (q.empty() || c.empty()) throw DataError("dtw_brute_force: empty series");
  if (q.size() > kBruteForceCap || c.size() > kBruteForceCap) {
    throw DataError("dtw_brute_force: series longer than the enumeration cap");
  }
  if (p < 1) throw ConfigError("dtw_brute_force: p must be >= 1");
  Walk w{q, c};
  w.from(0, 0, 0.0, 0);
  return {w.best, w.best_len};
}

double window_mean(std::span<const double> x, std::size_t i, std::size_t n) {
  const std::size_t first = i + 1 >= n ? i + 1 - n : 0;
  double sum = 0.0;
  for (std::size_t k = first; k <= i; ++k) sum += x[k];
  return sum / static_cast<double>(i + 1 - first);
}

bool keeps_junction(double s_in, double s_out, double tolerance) {
  if (s_in == 0.0 && s_out == 0.0) return false;
  if (s_in == 0.0 || s_out == 0.0) return true;
  const double ratio = s_out / s_in;
  return ratio > tolerance || ratio < 1.0 / tolerance;
}

std::vector<ExtremePoint> as_extrema(std::span<const KeyPoint> keys) {
  std::vector<ExtremePoint> out;
  for (const auto& k : keys) out.push_back({k.value, k.t, ExtremumKind::endpoint, k.index});
  return out;
}

}  // namespace gasdetect::oracle
