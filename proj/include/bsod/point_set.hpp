#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bsod/error.hpp"

namespace bsod {

/// Dense n x d block of finite observations, stored row-major.
class PointSet {
 public:
  PointSet() = default;

  PointSet(std::size_t n, std::size_t d, std::vector<double> data)
      : n_(n), d_(d), data_(std::move(data)) {
    if (n_ == 0 || d_ == 0) {
      throw Error(Errc::InvalidArgument, "point set needs n >= 1 and d >= 1");
    }
    if (data_.size() != n_ * d_) {
      throw Error(Errc::DimensionMismatch, "expected " + std::to_string(n_ * d_) +
                                               " coordinates, got " + std::to_string(data_.size()));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (!std::isfinite(data_[k])) {
        throw Error(Errc::NonFiniteInput, "coordinate " + std::to_string(k % d_) + " of row " +
                                              std::to_string(k / d_) + " is not finite");
      }
    }
  }

  static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error(Errc::InvalidArgument, "point set needs n >= 1");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw Error(Errc::DimensionMismatch, "ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointSet(rows.size(), d, std::move(flat));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * d_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  /// Rows at the given positions, in that order.
  PointSet subset(std::span<const std::size_t> rows) const {
    std::vector<double> out;
    out.reserve(rows.size() * d_);
    for (std::size_t r : rows) {
      auto src = row(r);
      out.insert(out.end(), src.begin(), src.end());
    }
    return PointSet(rows.size(), d_, std::move(out));
  }

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace bsod
