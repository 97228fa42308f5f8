#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "bsod/error.hpp"
#include "bsod/isolation_forest.hpp"
#include "bsod/lof.hpp"

namespace bsod {

/// ceil(n * c), ignoring a product that lands a rounding error above an integer; at least 1.
inline std::size_t flag_count(std::size_t n, double contamination) {
  if (!(contamination > 0.0 && contamination < 1.0)) {
    throw Error(Errc::InvalidContamination, "contamination must lie in (0, 1)");
  }
  const double x = static_cast<double>(n) * contamination;
  double k = std::ceil(x);
  if (k - x > 1.0 - 1e-9 * std::max(1.0, x)) k -= 1.0;
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), std::min<std::size_t>(1, n), n);
}

/// The ceil(n * c) highest-scoring indices, ascending. Equal scores favour the lower index.
inline std::vector<std::size_t> flag_top_fraction(std::span<const double> scores, double contamination) {
  const std::size_t k = flag_count(scores.size(), contamination);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace bsod
