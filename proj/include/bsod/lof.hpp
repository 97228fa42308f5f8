#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bsod/error.hpp"
#include "bsod/point_set.hpp"

namespace bsod {

struct LofConfig {
  std::size_t k_neighbors = 20;
};

/// Small offset added to the mean reachability distance so duplicates give a finite density.
inline constexpr double kLofDensityFloor = 1e-10;

namespace detail {

/// Exact k nearest neighbours of every point, ordered by (distance, index).
inline void knn_exact(const PointSet& points, std::size_t k, std::vector<std::size_t>& idx,
                      std::vector<double>& dist) {
  const std::size_t n = points.size();
  idx.assign(n * k, 0);
  dist.assign(n * k, 0.0);
  using Entry = std::pair<double, std::size_t>;
  std::vector<Entry> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    heap.clear();
    const auto xi = points.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Entry e{euclidean_distance(xi, points.row(j)), j};
      if (heap.size() < k) {
        heap.push_back(e);
        std::push_heap(heap.begin(), heap.end());
      } else if (e < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = e;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    std::sort_heap(heap.begin(), heap.end());
    for (std::size_t r = 0; r < k; ++r) {
      dist[i * k + r] = heap[r].first;
      idx[i * k + r] = heap[r].second;
    }
  }
}

}  // namespace detail

/// Local Outlier Factor with exactly k neighbours per point (distance ties go to the lower
/// index). Scores above 1 mean the point is less dense than its neighbours.
inline std::vector<double> lof_scores(const PointSet& points, const LofConfig& config = {}) {
  const std::size_t n = points.size();
  const std::size_t k = config.k_neighbors;
  if (k < 1) throw Error(Errc::InvalidArgument, "k_neighbors must be at least 1");
  if (n <= k) {
    throw Error(Errc::TooFewPoints, "LOF with k = " + std::to_string(k) + " needs more than " +
                                        std::to_string(k) + " points, got " + std::to_string(n));
  }
  std::vector<std::size_t> nn;
  std::vector<double> nd;
  detail::knn_exact(points, k, nn, nd);

  std::vector<double> kdist(n);
  for (std::size_t i = 0; i < n; ++i) kdist[i] = nd[i * k + k - 1];

  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t j = nn[i * k + r];
      sum += std::max(kdist[j], nd[i * k + r]);
    }
    lrd[i] = 1.0 / (sum / static_cast<double>(k) + kLofDensityFloor);
  }

  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) sum += lrd[nn[i * k + r]];
    scores[i] = sum / static_cast<double>(k) / lrd[i];
  }
  return scores;
}

}  // namespace bsod
