#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "bsod/cluster1d.hpp"
#include "bsod/error.hpp"
#include "bsod/graph.hpp"
#include "bsod/point_set.hpp"
#include "bsod/spectral.hpp"

namespace bsod {

struct BsodConfig {
  double contamination = 0.1;
  double eps = 0.5;
  double eigen_tol = 1e-8;
  std::size_t eigen_max_iter = 5000;
  std::uint64_t seed = 0;
  EigenMethod eigen_method = EigenMethod::Lanczos;

  void validate() const {
    if (!(contamination > 0.0 && contamination < 1.0)) {
      throw Error(Errc::InvalidContamination, "contamination must lie in (0, 1), got " + std::to_string(contamination));
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      throw Error(Errc::InvalidEpsilon, "eps must be positive, got " + std::to_string(eps));
    }
    if (!(eigen_tol > 0.0)) throw Error(Errc::InvalidTolerance, "eigen_tol must be positive");
    if (eigen_max_iter == 0) throw Error(Errc::InvalidArgument, "eigen_max_iter must be positive");
  }
};

/// Why a round stopped the loop without splitting.
enum class DegenerateExit { None, NoEdges, DegenerateEigenvector, TooFewPoints };

constexpr std::string_view degenerate_exit_name(DegenerateExit e) noexcept {
  switch (e) {
    case DegenerateExit::None: return "none";
    case DegenerateExit::NoEdges: return "no_edges";
    case DegenerateExit::DegenerateEigenvector: return "degenerate_eigenvector";
    case DegenerateExit::TooFewPoints: return "too_few_points";
  }
  return "unknown";
}

struct RoundTrace {
  std::size_t round_index = 0;
  std::size_t input_size = 0;
  /// Indices into the original dataset, ascending.
  std::vector<std::size_t> removed_indices;
  std::size_t kept_size = 0;
  double eigenvalue = 0.0;
  std::size_t eigen_iterations = 0;
  bool eigen_converged = false;
  /// (smaller, larger)
  std::array<std::size_t, 2> cluster_sizes{};
  DegenerateExit degenerate_exit = DegenerateExit::None;

  bool operator==(const RoundTrace&) const = default;
};

struct DetectionResult {
  /// Points still retained when the loop stopped, ascending original indices.
  std::vector<std::size_t> outlier_indices;
  std::vector<RoundTrace> rounds;
  /// (r + 1) / (R + 1) for a point removed in round r of R splitting rounds; survivors get 1.
  std::vector<double> scores;

  bool degenerate() const noexcept {
    return !rounds.empty() && rounds.back().degenerate_exit != DegenerateExit::None;
  }

  bool operator==(const DetectionResult&) const = default;
};

/// Per feature: subtract the mean and divide by the sample standard deviation (n - 1).
/// Features whose deviation is below 1e-12 are only centred.
inline PointSet standardize(const PointSet& points) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  if (n < 2) throw Error(Errc::TooFewPoints, "standardization needs at least two points");
  std::vector<double> out(points.data().begin(), points.data().end());
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += points(i, k);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = points(i, k) - mean;
      ss += t * t;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double inv = sd < 1e-12 ? 1.0 : 1.0 / sd;
    for (std::size_t i = 0; i < n; ++i) {
      double& x = out[i * d + k];
      x = sd < 1e-12 ? 0.0 : (x - mean) * inv;
    }
  }
  return PointSet(n, d, std::move(out));
}

/// Anything callable as `EigenPair(const SparseGraph&, const EigenOptions&)`.
template <class F>
concept EigenSolver = std::invocable<const F&, const SparseGraph&, const EigenOptions&> &&
                      std::convertible_to<std::invoke_result_t<const F&, const SparseGraph&, const EigenOptions&>,
                                          EigenPair>;

struct DefaultEigenSolver {
  EigenMethod method = EigenMethod::Lanczos;

  EigenPair operator()(const SparseGraph& graph, const EigenOptions& opts) const {
    return dominant_eigenpair(graph, method, opts);
  }
};

struct RoundOutcome {
  RoundTrace trace;
  /// Original indices carried into the next round. Equal to the input on a degenerate exit.
  std::vector<std::size_t> kept_indices;
};

/// One weak learner: standardize the current subset, build its eps-graph, split |v_n| with
/// 2-means and keep the larger cluster (the low-centroid one on a size tie).
template <EigenSolver Solver>
RoundOutcome bsod_round(const PointSet& points, std::span<const std::size_t> original_indices,
                        const BsodConfig& config, std::size_t round_index, const Solver& solver) {
  RoundOutcome out;
  RoundTrace& t = out.trace;
  t.round_index = round_index;
  t.input_size = original_indices.size();
  out.kept_indices.assign(original_indices.begin(), original_indices.end());
  t.kept_size = t.input_size;

  if (t.input_size < 2) {
    t.degenerate_exit = DegenerateExit::TooFewPoints;
    return out;
  }
  const PointSet local = standardize(points.subset(original_indices));
  const SparseGraph graph = build_epsilon_graph(local, config.eps);
  if (graph.edge_count == 0) {
    t.degenerate_exit = DegenerateExit::NoEdges;
    return out;
  }

  const EigenPair pair = solver(graph, EigenOptions{config.eigen_tol, config.eigen_max_iter, config.seed + round_index});
  t.eigenvalue = pair.value;
  t.eigen_iterations = pair.iterations;
  t.eigen_converged = pair.converged;

  const std::vector<double> magnitudes = abs_components(pair);
  Split2 split;
  try {
    split = two_means_1d(magnitudes);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateValues) throw;
    t.degenerate_exit = DegenerateExit::DegenerateEigenvector;
    return out;
  }

  const std::uint8_t keep = split.sizes[1] > split.sizes[0] ? 1 : 0;
  t.cluster_sizes = {std::min(split.sizes[0], split.sizes[1]), std::max(split.sizes[0], split.sizes[1])};
  out.kept_indices.clear();
  for (std::size_t i = 0; i < original_indices.size(); ++i) {
    (split.assignments[i] == keep ? out.kept_indices : t.removed_indices).push_back(original_indices[i]);
  }
  t.kept_size = out.kept_indices.size();
  return out;
}

/// Boosted spectral outlier detection.
///
/// Rounds run while more than n * c points are retained; the points left at the end are the
/// outliers. Every splitting round removes at least one point, so the loop terminates. A
/// degenerate round stops the loop early and leaves everything still retained flagged.
template <EigenSolver Solver>
DetectionResult bsod_detect(const PointSet& points, const BsodConfig& config, const Solver& solver) {
  config.validate();
  const std::size_t n = points.size();
  if (n < 2) throw Error(Errc::TooFewPoints, "detection needs at least two points");

  const double target = static_cast<double>(n) * config.contamination;
  std::vector<std::size_t> current(n);
  std::iota(current.begin(), current.end(), std::size_t{0});

  DetectionResult result;
  while (static_cast<double>(current.size()) > target) {
    RoundOutcome step = bsod_round(points, current, config, result.rounds.size(), solver);
    const bool stop = step.trace.degenerate_exit != DegenerateExit::None;
    result.rounds.push_back(std::move(step.trace));
    if (stop) break;
    current = std::move(step.kept_indices);
  }

  result.outlier_indices = current;
  std::sort(result.outlier_indices.begin(), result.outlier_indices.end());

  const std::size_t splitting = result.degenerate() ? result.rounds.size() - 1 : result.rounds.size();
  result.scores.assign(n, 1.0);
  for (std::size_t r = 0; r < splitting; ++r) {
    const double s = static_cast<double>(r + 1) / static_cast<double>(splitting + 1);
    for (std::size_t idx : result.rounds[r].removed_indices) result.scores[idx] = s;
  }
  return result;
}

inline DetectionResult bsod_detect(const PointSet& points, const BsodConfig& config) {
  return bsod_detect(points, config, DefaultEigenSolver{config.eigen_method});
}

}  // namespace bsod
