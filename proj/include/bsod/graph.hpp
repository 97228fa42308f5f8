#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsod/error.hpp"
#include "bsod/point_set.hpp"

namespace bsod {

/// Symmetric 0/1 adjacency in compressed sparse row form.
///
/// Neighbor lists are sorted ascending and never contain the vertex itself, so two graphs
/// over the same vertex set compare equal exactly when they have the same edges.
struct SparseGraph {
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::uint32_t> neighbors;
  std::vector<std::size_t> degrees;
  std::size_t n = 0;
  std::size_t edge_count = 0;

  std::span<const std::uint32_t> neighbors_of(std::size_t i) const noexcept {
    return {neighbors.data() + row_offsets[i], row_offsets[i + 1] - row_offsets[i]};
  }

  std::size_t max_degree() const noexcept {
    return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  }

  bool operator==(const SparseGraph&) const = default;
};

namespace detail {

inline void check_graph_inputs(const PointSet& points, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(Errc::InvalidEpsilon, "eps must be a positive finite number, got " + std::to_string(eps));
  }
  for (double x : points.data()) {
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteInput, "point coordinates must be finite");
  }
}

inline bool within(std::span<const double> a, std::span<const double> b, double eps) noexcept {
  return euclidean_distance(a, b) <= eps;
}

/// Same answer as `within` given the squared distance, but only takes the square root for
/// pairs whose squared distance lies in a thin band around eps^2.
struct WithinTest {
  double eps;
  double lo;
  double hi;

  explicit WithinTest(double e) noexcept : eps(e), lo(e * e * (1.0 - 1e-9)), hi(e * e * (1.0 + 1e-9)) {}

  bool operator()(double squared) const noexcept {
    if (squared < lo) return true;
    if (squared > hi) return false;
    return std::sqrt(squared) <= eps;
  }
};

/// Builds the sorted CSR graph from the upper half of the adjacency: `entries` in
/// [row_begin[i], row_end[i]) are the neighbours j > i of vertex i, in any order.
///
/// Two counting transposes do the sorting. The first fills the lower part of every row
/// (neighbours j < i) by walking j upwards; the second walks those lower parts to fill the
/// upper parts, again in increasing j.
inline SparseGraph from_upper_rows(std::size_t n, const std::vector<std::size_t>& row_begin,
                                   const std::vector<std::size_t>& row_end,
                                   const std::vector<std::uint32_t>& entries) {
  std::vector<std::size_t> lower(n, 0);
  for (std::uint32_t i : entries) ++lower[i];
  SparseGraph g;
  g.n = n;
  g.degrees.resize(n);
  g.row_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    g.degrees[i] = lower[i] + (row_end[i] - row_begin[i]);
    g.row_offsets[i + 1] = g.row_offsets[i] + g.degrees[i];
  }
  g.neighbors.resize(2 * entries.size());
  std::vector<std::size_t> cursor(g.row_offsets.begin(), g.row_offsets.end() - 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = row_begin[j]; p < row_end[j]; ++p) {
      g.neighbors[cursor[entries[p]]++] = static_cast<std::uint32_t>(j);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = g.row_offsets[j]; p < g.row_offsets[j] + lower[j]; ++p) {
      g.neighbors[cursor[g.neighbors[p]]++] = static_cast<std::uint32_t>(j);
    }
  }
  g.edge_count = entries.size();
  return g;
}

/// Appends one sorted adjacency row and closes it.
inline void push_row(SparseGraph& g, std::vector<std::uint32_t>& row) {
  std::sort(row.begin(), row.end());
  g.neighbors.insert(g.neighbors.end(), row.begin(), row.end());
  g.degrees.push_back(row.size());
  g.row_offsets.push_back(g.neighbors.size());
  row.clear();
}

inline void finish(SparseGraph& g) { g.edge_count = g.neighbors.size() / 2; }

// Cell coordinates beyond this magnitude lose integer precision in a double.
inline constexpr double kMaxCellCoordinate = 4.0e15;
inline constexpr std::size_t kMaxGridDim = 4;

using CellKey = std::array<std::int64_t, kMaxGridDim>;

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t c : k) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Visits each pair once; the squared sum is accumulated in the same order as
// `squared_distance`, so the result is identical to the reference builder.
inline SparseGraph all_pairs_graph(const PointSet& points, double eps) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const WithinTest near(eps);
  const double* x = points.data().data();
  std::vector<std::size_t> row_begin(n), row_end(n);
  std::vector<std::uint32_t> entries;
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x + i * d;
    row_begin[i] = entries.size();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* xj = x + j * d;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = xi[k] - xj[k];
        s += t * t;
      }
      dist[j] = s;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (near(dist[j])) entries.push_back(static_cast<std::uint32_t>(j));
    }
    row_end[i] = entries.size();
  }
  return from_upper_rows(n, row_begin, row_end, entries);
}

}  // namespace detail

/// All-pairs construction. Quadratic; kept as the reference the grid builder is tested against.
inline SparseGraph brute_force_graph(const PointSet& points, double eps) {
  detail::check_graph_inputs(points, eps);
  const std::size_t n = points.size();
  SparseGraph g;
  g.n = n;
  g.degrees.reserve(n);
  g.row_offsets.reserve(n + 1);
  std::vector<std::uint32_t> row;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && detail::within(points.row(i), points.row(j), eps)) {
        row.push_back(static_cast<std::uint32_t>(j));
      }
    }
    detail::push_row(g, row);
  }
  detail::finish(g);
  return g;
}

/// Connects every pair of distinct points at Euclidean distance <= eps.
///
/// Points are bucketed into a uniform grid of side eps over their first (at most four)
/// coordinates, so each point only scans the 3^g cells around its own. Two points within eps
/// are also within eps in any subset of coordinates, so no pair is missed. Coordinates too
/// large for integer cell ids fall back to an all-pairs scan.
inline SparseGraph build_epsilon_graph(const PointSet& points, double eps) {
  detail::check_graph_inputs(points, eps);
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const std::size_t gd = std::min(d, detail::kMaxGridDim);

  std::vector<detail::CellKey> keys(n, detail::CellKey{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < gd; ++k) {
      const double c = std::floor(points(i, k) / eps);
      if (!(std::abs(c) < detail::kMaxCellCoordinate)) return detail::all_pairs_graph(points, eps);
      keys[i][k] = static_cast<std::int64_t>(c);
    }
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });

  // coordinates in cell order, so each cell is a contiguous block
  std::vector<double> sorted(n * d);
  for (std::size_t p = 0; p < n; ++p) {
    const auto row = points.row(order[p]);
    std::copy(row.begin(), row.end(), sorted.begin() + static_cast<std::ptrdiff_t>(p * d));
  }

  // occupied cells as [begin, end) ranges of `order`, and a lookup from key to cell
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  std::unordered_map<detail::CellKey, std::size_t, detail::CellKeyHash> cell_of;
  cell_of.reserve(n);
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s + 1;
    while (e < n && keys[order[e]] == keys[order[s]]) ++e;
    cell_of.emplace(keys[order[s]], cells.size());
    cells.emplace_back(s, e);
    s = e;
  }

  std::size_t stencil = 1;
  for (std::size_t k = 0; k < gd; ++k) stencil *= 3;

  const detail::WithinTest near(eps);
  std::vector<std::size_t> row_begin(n), row_end(n);
  std::vector<std::uint32_t> entries;
  std::vector<std::pair<std::size_t, std::size_t>> around;
  for (const auto& [cb, ce] : cells) {
    around.clear();
    for (std::size_t s = 0; s < stencil; ++s) {
      detail::CellKey probe = keys[order[cb]];
      std::size_t code = s;
      for (std::size_t k = 0; k < gd; ++k) {
        probe[k] += static_cast<std::int64_t>(code % 3) - 1;
        code /= 3;
      }
      if (const auto it = cell_of.find(probe); it != cell_of.end()) around.push_back(cells[it->second]);
    }
    for (std::size_t a = cb; a < ce; ++a) {
      const std::uint32_t i = order[a];
      const double* xi = sorted.data() + a * d;
      row_begin[i] = entries.size();
      for (const auto& [nb, ne] : around) {
        for (std::size_t b = nb; b < ne; ++b) {
          const std::uint32_t j = order[b];
          if (j <= i) continue;
          const double* xj = sorted.data() + b * d;
          double sq = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            const double t = xi[k] - xj[k];
            sq += t * t;
          }
          if (near(sq)) entries.push_back(j);
        }
      }
      row_end[i] = entries.size();
    }
  }
  return detail::from_upper_rows(n, row_begin, row_end, entries);
}

/// y = (D - W) x without forming the matrix.
inline void laplacian_apply(const SparseGraph& graph, std::span<const double> x, std::span<double> y) {
  if (x.size() != graph.n || y.size() != graph.n) {
    throw Error(Errc::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                             " does not match graph size " + std::to_string(graph.n));
  }
  for (std::size_t i = 0; i < graph.n; ++i) {
    double acc = 0.0;
    for (std::uint32_t j : graph.neighbors_of(i)) acc += x[j];
    y[i] = static_cast<double>(graph.degrees[i]) * x[i] - acc;
  }
}

inline std::vector<double> laplacian_apply(const SparseGraph& graph, std::span<const double> x) {
  std::vector<double> y(graph.n);
  laplacian_apply(graph, x, y);
  return y;
}

}  // namespace bsod
