#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "bsod/error.hpp"
#include "bsod/point_set.hpp"

namespace bsod {

struct IForestConfig {
  std::size_t n_trees = 100;
  std::size_t subsample = 256;
  std::uint64_t seed = 0;
};

/// Average unsuccessful-search path length in a binary search tree of m keys.
inline double average_path_length(std::size_t m) noexcept {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  constexpr double kEulerGamma = 0.57721566490153286061;
  const double md = static_cast<double>(m);
  return 2.0 * (std::log(md - 1.0) + kEulerGamma) - 2.0 * (md - 1.0) / md;
}

class IsolationTree {
 public:
  struct Node {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;   // child for x[feature] < threshold
    std::size_t right = 0;  // child for x[feature] >= threshold
    std::size_t size = 0;   // sample count, leaves only
    bool leaf = true;
  };

  IsolationTree(const PointSet& points, std::vector<std::size_t> sample, std::size_t height_limit,
                std::mt19937_64& rng) {
    grow(points, sample, 0, sample.size(), 0, height_limit, rng);
  }

  /// Depth of the leaf reached plus the expected depth of the unbuilt subtree below it.
  double path_length(std::span<const double> x) const noexcept {
    std::size_t at = 0;
    double depth = 0.0;
    while (!nodes_[at].leaf) {
      const Node& nd = nodes_[at];
      at = x[nd.feature] < nd.threshold ? nd.left : nd.right;
      depth += 1.0;
    }
    return depth + average_path_length(nodes_[at].size);
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  std::size_t grow(const PointSet& points, std::vector<std::size_t>& sample, std::size_t begin,
                   std::size_t end, std::size_t depth, std::size_t limit, std::mt19937_64& rng) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{});
    nodes_[id].size = end - begin;
    if (end - begin <= 1 || depth >= limit) return id;

    // only features that vary inside the node can separate anything
    std::vector<std::size_t> candidates;
    std::vector<std::pair<double, double>> ranges;
    for (std::size_t k = 0; k < points.dim(); ++k) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t p = begin; p < end; ++p) {
        const double v = points(sample[p], k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > lo) {
        candidates.push_back(k);
        ranges.emplace_back(lo, hi);
      }
    }
    if (candidates.empty()) return id;

    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const std::size_t c = pick(rng);
    const auto [lo, hi] = ranges[c];
    std::uniform_real_distribution<double> u(lo, hi);
    double thr = u(rng);
    if (thr <= lo) thr = std::nextafter(lo, hi);
    if (thr > hi) thr = hi;

    const std::size_t feature = candidates[c];
    const auto mid = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(begin),
                                    sample.begin() + static_cast<std::ptrdiff_t>(end),
                                    [&](std::size_t i) { return points(i, feature) < thr; });
    const auto split = static_cast<std::size_t>(mid - sample.begin());

    nodes_[id].leaf = false;
    nodes_[id].feature = feature;
    nodes_[id].threshold = thr;
    const std::size_t left = grow(points, sample, begin, split, depth + 1, limit, rng);
    const std::size_t right = grow(points, sample, split, end, depth + 1, limit, rng);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<Node> nodes_;
};

/// Isolation forest anomaly scores 2^(-E[h(x)] / c(psi)) in (0, 1); higher is more anomalous.
///
/// Each tree sees psi = min(subsample, n) points drawn without replacement and is grown to
/// depth ceil(log2 psi) by random feature / random threshold splits.
inline std::vector<double> iforest_scores(const PointSet& points, const IForestConfig& config = {}) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(Errc::TooFewPoints, "isolation forest needs at least two points");
  if (config.n_trees < 1) throw Error(Errc::InvalidArgument, "n_trees must be at least 1");
  if (config.subsample < 2) throw Error(Errc::InvalidArgument, "subsample must be at least 2");

  const std::size_t psi = std::min(config.subsample, n);
  const auto limit = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(psi))));
  std::mt19937_64 rng(config.seed);

  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> pool(n);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < psi; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    IsolationTree tree(points, std::vector<std::size_t>(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(psi)),
                       limit, rng);
    for (std::size_t i = 0; i < n; ++i) total[i] += tree.path_length(points.row(i));
  }

  const double norm = average_path_length(psi);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = std::exp2(-(total[i] / static_cast<double>(config.n_trees)) / norm);
  }
  return scores;
}

}  // namespace bsod
