#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bsod/error.hpp"
#include "bsod/graph.hpp"

namespace bsod {

/// Largest Laplacian eigenvalue with a unit eigenvector.
///
/// `iterations` counts Laplacian products. When the residual target was not met within the
/// budget, `converged` is false and `iterations` equals the budget; the vector is still the
/// best available estimate.
struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

enum class EigenMethod { Power, Lanczos };

struct EigenOptions {
  double tol = 1e-8;
  std::size_t max_iter = 5000;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_eigen_inputs(const SparseGraph& graph, double tol, std::size_t max_iter) {
  if (graph.edge_count == 0) throw Error(Errc::NoEdges, "the Laplacian of an edgeless graph is zero");
  if (!(tol > 0.0)) throw Error(Errc::InvalidTolerance, "tolerance must be positive");
  if (max_iter == 0) throw Error(Errc::InvalidArgument, "max_iter must be positive");
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

inline void scale(std::span<double> a, double f) noexcept {
  for (double& x : a) x *= f;
}

inline std::vector<double> random_unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  scale(v, 1.0 / norm2(v));
  return v;
}

/// Rayleigh quotient and true residual of a unit vector; `work` receives L v.
inline std::pair<double, double> rayleigh_residual(const SparseGraph& graph, std::span<const double> v,
                                                   std::span<double> work) {
  laplacian_apply(graph, v, work);
  const double lambda = dot(v, work);
  double r2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = work[i] - lambda * v[i];
    r2 += t * t;
  }
  return {lambda, std::sqrt(r2)};
}

// Absolute test. It implies residual <= tol * max(lambda, 1) as well.
inline bool residual_ok(double residual, double tol) noexcept {
  return residual <= tol;
}

}  // namespace detail

/// Power iteration v <- Lv / |Lv| from a seeded random start.
///
/// L is positive semidefinite, so the largest-magnitude eigenvalue is the largest one and no
/// shift is applied. Stops once |Lv - lambda v| <= tol.
inline EigenPair dominant_eigenpair(const SparseGraph& graph, const EigenOptions& opts = {}) {
  detail::check_eigen_inputs(graph, opts.tol, opts.max_iter);
  std::vector<double> v = detail::random_unit_vector(graph.n, opts.seed);
  std::vector<double> w(graph.n);
  EigenPair out;
  for (std::size_t it = 1;; ++it) {
    const auto [lambda, residual] = detail::rayleigh_residual(graph, v, w);
    const bool done = detail::residual_ok(residual, opts.tol);
    const double wn = detail::norm2(w);
    if (done || it >= opts.max_iter || wn == 0.0) {
      out.value = lambda;
      out.residual = residual;
      out.converged = done;
      out.iterations = done ? it : opts.max_iter;
      out.vector = std::move(v);
      return out;
    }
    detail::scale(w, 1.0 / wn);
    std::swap(v, w);
  }
}

inline EigenPair dominant_eigenpair(const SparseGraph& graph, double tol, std::size_t max_iter,
                                    std::uint64_t seed) {
  return dominant_eigenpair(graph, EigenOptions{tol, max_iter, seed});
}

namespace detail {

/// Largest eigenvalue of the symmetric tridiagonal (diag, sub) by Sturm-sequence bisection.
inline double tridiagonal_top_eigenvalue(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub) {
  const Eigen::Index m = diag.size();
  double lo = diag(0), hi = diag(0);
  for (Eigen::Index i = 0; i < m; ++i) {  // Gershgorin interval
    const double r = (i > 0 ? std::abs(sub(i - 1)) : 0.0) + (i + 1 < m ? std::abs(sub(i)) : 0.0);
    lo = std::min(lo, diag(i) - r);
    hi = std::max(hi, diag(i) + r);
  }
  const double floor = std::numeric_limits<double>::min();
  // number of eigenvalues greater than x
  auto count_above = [&](double x) {
    Eigen::Index above = 0;
    double q = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double off = i > 0 ? sub(i - 1) * sub(i - 1) : 0.0;
      q = (diag(i) - x) - (i > 0 ? off / q : 0.0);
      if (std::abs(q) < floor) q = -floor;
      if (q > 0.0) ++above;
    }
    return above;
  };
  const double eps = std::numeric_limits<double>::epsilon();
  const double absolute = eps * std::max(std::abs(lo), std::abs(hi));
  while (hi - lo > std::max(4.0 * eps * std::max(std::abs(lo), std::abs(hi)), absolute)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (count_above(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Unit eigenvector of the symmetric tridiagonal (diag, sub) for its largest eigenvalue
/// `top`, by inverse iteration with a shift just above `top`. The shifted matrix is
/// positive definite, so LDL^T without pivoting is stable.
inline Eigen::VectorXd tridiagonal_top_vector(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                              double top) {
  const Eigen::Index m = diag.size();
  const double shift = top + 1e-10 * std::max(std::abs(top), 1.0);
  Eigen::VectorXd d(m), l(std::max<Eigen::Index>(m - 1, 0));
  d(0) = shift - diag(0);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    l(i) = -sub(i) / d(i);
    d(i + 1) = (shift - diag(i + 1)) + l(i) * sub(i);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Ones(m);
  for (int it = 0; it < 3; ++it) {
    for (Eigen::Index i = 1; i < m; ++i) y(i) -= l(i - 1) * y(i - 1);
    y.array() /= d.array();
    for (Eigen::Index i = m - 2; i >= 0; --i) y(i) -= l(i) * y(i + 1);
    y /= y.norm();
  }
  return y;
}

}  // namespace detail

/// Lanczos with full reorthogonalization and restarts from the current Ritz vector.
///
/// Same contract and stopping rule as the power iteration; it needs far fewer Laplacian
/// products when the top of the spectrum is clustered.
inline EigenPair dominant_eigenpair_lanczos(const SparseGraph& graph, const EigenOptions& opts = {},
                                            std::size_t max_basis = 160) {
  detail::check_eigen_inputs(graph, opts.tol, opts.max_iter);
  const std::size_t n = graph.n;
  max_basis = std::max<std::size_t>(1, std::min(max_basis, n));
  constexpr std::size_t kCheckEvery = 4;
  const auto rows = static_cast<Eigen::Index>(n);

  const std::vector<double> start = detail::random_unit_vector(n, opts.seed);
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(start.data(), rows);
  Eigen::VectorXd w(rows);
  Eigen::MatrixXd basis(rows, static_cast<Eigen::Index>(max_basis));
  std::vector<double> alpha;
  std::vector<double> beta;
  std::size_t products = 0;
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    laplacian_apply(graph, std::span<const double>(x.data(), n), std::span<double>(y.data(), n));
  };

  for (;;) {
    basis.col(0) = v;
    alpha.clear();
    beta.clear();
    Eigen::VectorXd ritz;
    Eigen::Index m = 0;
    for (;;) {
      const Eigen::Index k = m++;
      apply(basis.col(k), w);
      ++products;
      const double a = basis.col(k).dot(w);
      alpha.push_back(a);
      w -= a * basis.col(k);
      if (k > 0) w -= beta[static_cast<std::size_t>(k - 1)] * basis.col(k - 1);
      // classical Gram-Schmidt, repeated once when the first pass cancels most of w
      double b = w.norm();
      for (int pass = 0; pass < 2; ++pass) {
        const double before = b;
        const Eigen::VectorXd c = basis.leftCols(m).transpose() * w;
        w.noalias() -= basis.leftCols(m) * c;
        b = w.norm();
        if (b > 0.7071 * before) break;
      }

      // the small eigenproblem is only solved every few steps and when the basis is full
      const bool full = static_cast<std::size_t>(m) >= max_basis || products >= opts.max_iter;
      const bool tiny = b <= 1e-13 * std::max(std::abs(a), 1.0);
      if (!full && !tiny && static_cast<std::size_t>(m) % kCheckEvery != 0) {
        beta.push_back(b);
        basis.col(m) = w / b;
        continue;
      }

      const Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      const Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                        : Eigen::VectorXd();
      const double theta = detail::tridiagonal_top_eigenvalue(diag, sub);
      ritz = detail::tridiagonal_top_vector(diag, sub, theta);
      const double estimate = b * std::abs(ritz(m - 1));

      const bool invariant = b <= 1e-13 * std::max(std::abs(theta), 1.0);
      if (invariant || full || detail::residual_ok(estimate, opts.tol)) break;
      beta.push_back(b);
      basis.col(m) = w / b;
    }

    v.noalias() = basis.leftCols(m) * ritz;
    v /= v.norm();

    std::vector<double> out_vec(v.data(), v.data() + rows);
    std::vector<double> work(n);
    const auto [lambda, residual] = detail::rayleigh_residual(graph, out_vec, work);
    ++products;
    const bool done = detail::residual_ok(residual, opts.tol);
    if (done || products >= opts.max_iter) {
      EigenPair out;
      out.value = lambda;
      out.residual = residual;
      out.converged = done;
      out.iterations = done ? products : opts.max_iter;
      out.vector = std::move(out_vec);
      return out;
    }
  }
}

inline EigenPair dominant_eigenpair(const SparseGraph& graph, EigenMethod method, const EigenOptions& opts) {
  return method == EigenMethod::Lanczos ? dominant_eigenpair_lanczos(graph, opts)
                                        : dominant_eigenpair(graph, opts);
}

/// |v|, elementwise. Removes the global sign ambiguity of the eigenvector.
inline std::vector<double> abs_components(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::abs(x); });
  return out;
}

inline std::vector<double> abs_components(const EigenPair& pair) { return abs_components(pair.vector); }

}  // namespace bsod
