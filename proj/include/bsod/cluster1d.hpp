#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "bsod/error.hpp"

namespace bsod {

/// Two-cluster partition of scalar values. Cluster 1 is the one with the larger centroid.
struct Split2 {
  std::vector<std::uint8_t> assignments;
  std::array<std::size_t, 2> sizes{};
  std::array<double, 2> centroids{};
  double sse = 0.0;
  /// Every value <= threshold is in cluster 0.
  double threshold = 0.0;
};

inline constexpr double kDegenerateRange = 1e-15;

/// Globally optimal 2-means in one dimension.
///
/// The optimum is always a threshold partition, so after sorting every boundary between two
/// distinct values is scored with prefix sums and the cheapest one wins. SSE ties (relative
/// 1e-12) go to the boundary that leaves the high cluster smaller.
inline Split2 two_means_1d(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(Errc::TooFewPoints, "2-means needs at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi - *lo >= kDegenerateRange)) {
    throw Error(Errc::DegenerateValues, "all values are equal; no meaningful split exists");
  }

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  // centring first keeps the prefix-sum SSE formula well conditioned
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  std::vector<double> s1(n + 1, 0.0);
  std::vector<double> s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sorted[i] - mean;
    s1[i + 1] = s1[i] + x;
    s2[i + 1] = s2[i] + x * x;
  }
  auto sse_of = [&](std::size_t k) {  // first k values in cluster 0
    const double nl = static_cast<double>(k);
    const double nr = static_cast<double>(n - k);
    const double left = s2[k] - s1[k] * s1[k] / nl;
    const double right = (s2[n] - s2[k]) - (s1[n] - s1[k]) * (s1[n] - s1[k]) / nr;
    return std::max(left, 0.0) + std::max(right, 0.0);
  };

  const double tie = 1e-12 * std::max(s2[n], 1e-300);
  std::size_t best_k = 0;
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (!(sorted[k - 1] < sorted[k])) continue;
    const double e = sse_of(k);
    if (best_k == 0 || e < best - tie) {
      best = e;
      best_k = k;
    } else if (e <= best + tie) {
      best = std::min(best, e);
      best_k = k;
    }
  }

  Split2 out;
  out.threshold = sorted[best_k - 1];
  out.assignments.resize(n);
  std::array<double, 2> sums{};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t c = values[i] > out.threshold ? 1 : 0;
    out.assignments[i] = c;
    out.sizes[c] += 1;
    sums[c] += values[i];
  }
  out.centroids = {sums[0] / static_cast<double>(out.sizes[0]), sums[1] / static_cast<double>(out.sizes[1])};
  out.sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = values[i] - out.centroids[out.assignments[i]];
    out.sse += t * t;
  }
  return out;
}

}  // namespace bsod
