#pragma once

// Independent reference implementations used only by the tests. None of these call into the
// code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bsod/graph.hpp"
#include "bsod/point_set.hpp"

namespace oracle {

inline Eigen::MatrixXd dense_laplacian(const bsod::SparseGraph& g) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::uint32_t j : g.neighbors_of(i)) {
      L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= 1.0;
      L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += 1.0;
    }
  }
  return L;
}

/// Largest eigenvalue and its eigenvector from a dense symmetric solver.
inline std::pair<double, Eigen::VectorXd> dense_top_eigenpair(const bsod::SparseGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(g));
  const Eigen::Index last = es.eigenvalues().size() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

/// Minimum SSE over every assignment of values to two non-empty groups.
inline double exhaustive_two_means_sse(const std::vector<double>& v) {
  const std::size_t n = v.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    double s[2] = {0, 0};
    double c[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      s[g] += v[i];
      c[g] += 1;
    }
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      const double m = s[g] / c[g];
      sse += (v[i] - m) * (v[i] - m);
    }
    best = std::min(best, sse);
  }
  return best;
}

/// LOF transcribed directly from its definition over a full distance matrix.
inline std::vector<double> lof_transcription(const bsod::PointSet& p, std::size_t k) {
  const std::size_t n = p.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t d = 0; d < p.dim(); ++d) s += (p(i, d) - p(j, d)) * (p(i, d) - p(j, d));
      dist[i][j] = std::sqrt(s);
    }
  }
  std::vector<std::vector<std::size_t>> knn(n);
  std::vector<double> kdist(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      return dist[i][a] != dist[i][b] ? dist[i][a] < dist[i][b] : a < b;
    });
    knn[i].assign(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k));
    kdist[i] = dist[i][knn[i].back()];
  }
  std::vector<double> lrd(n);
  for (std::size_t a = 0; a < n; ++a) {
    double reach = 0;
    for (std::size_t b : knn[a]) reach += std::max(kdist[b], dist[a][b]);
    lrd[a] = 1.0 / (reach / static_cast<double>(k) + 1e-10);
  }
  std::vector<double> lof(n);
  for (std::size_t a = 0; a < n; ++a) {
    double ratio = 0;
    for (std::size_t b : knn[a]) ratio += lrd[b] / lrd[a];
    lof[a] = ratio / static_cast<double>(k);
  }
  return lof;
}

inline bsod::PointSet uniform_points(std::size_t n, std::size_t d, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> xs(n * d);
  for (double& x : xs) x = u(rng);
  return bsod::PointSet(n, d, std::move(xs));
}

/// Erdos-Renyi graph with a spanning path, so it is connected. Built directly in CSR.
inline bsod::SparseGraph random_connected_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || coin(rng)) {
        adj[i].push_back(static_cast<std::uint32_t>(j));
        adj[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  bsod::SparseGraph g;
  g.n = n;
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    g.neighbors.insert(g.neighbors.end(), row.begin(), row.end());
    g.degrees.push_back(row.size());
    g.row_offsets.push_back(g.neighbors.size());
  }
  g.edge_count = g.neighbors.size() / 2;
  return g;
}

inline bsod::SparseGraph complete_graph(std::size_t n) {
  bsod::SparseGraph g;
  g.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) g.neighbors.push_back(static_cast<std::uint32_t>(j));
    }
    g.degrees.push_back(n - 1);
    g.row_offsets.push_back(g.neighbors.size());
  }
  g.edge_count = n * (n - 1) / 2;
  return g;
}

/// Vertex 0 is the hub of m leaves.
inline bsod::SparseGraph star_graph(std::size_t m) {
  bsod::SparseGraph g;
  g.n = m + 1;
  for (std::size_t j = 1; j <= m; ++j) g.neighbors.push_back(static_cast<std::uint32_t>(j));
  g.degrees.push_back(m);
  g.row_offsets.push_back(g.neighbors.size());
  for (std::size_t j = 1; j <= m; ++j) {
    g.neighbors.push_back(0);
    g.degrees.push_back(1);
    g.row_offsets.push_back(g.neighbors.size());
  }
  g.edge_count = m;
  return g;
}

}  // namespace oracle
