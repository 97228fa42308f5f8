#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsod/error.hpp"
#include "bsod/point_set.hpp"

namespace bsod {

enum class Label : std::uint8_t { Inlier = 0, Outlier = 1 };

struct LabeledDataset {
  PointSet points;
  /// Empty for unlabeled data.
  std::vector<Label> labels;
  double contamination = 0.0;
  std::uint64_t seed = 0;
  std::string name;

  bool labeled() const noexcept { return !labels.empty(); }

  std::size_t outlier_count() const noexcept {
    std::size_t c = 0;
    for (Label l : labels) c += l == Label::Outlier ? 1 : 0;
    return c;
  }
};

/// Ring of inliers around the origin with uniform noise over a square.
struct CircleGeometry {
  double radius = 1.0;
  double radius_sd = 0.05;
  double box_half_width = 1.4;
};

/// Two interleaving half circles with uniform noise over their padded bounding box.
struct MoonsGeometry {
  double jitter_sd = 0.05;
  double box_margin = 0.5;
};

/// Outliers needed so they make up a fraction c of the total: round(n_in * c / (1 - c)).
inline std::size_t outlier_count_for(std::size_t n_inliers, double contamination) {
  if (!(contamination > 0.0 && contamination < 1.0)) {
    throw Error(Errc::InvalidContamination, "contamination must lie in (0, 1), got " + std::to_string(contamination));
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(n_inliers) * contamination / (1.0 - contamination)));
}

namespace detail {

inline LabeledDataset assemble(std::vector<double> xy, std::size_t n_in, std::size_t n_out, std::uint64_t seed,
                               std::string name) {
  LabeledDataset ds;
  const std::size_t n = n_in + n_out;
  ds.points = PointSet(n, 2, std::move(xy));
  ds.labels.assign(n_in, Label::Inlier);
  ds.labels.resize(n, Label::Outlier);
  ds.contamination = static_cast<double>(n_out) / static_cast<double>(n);
  ds.seed = seed;
  ds.name = std::move(name);
  return ds;
}

}  // namespace detail

/// Dataset 1: inliers on a noisy circle, outliers uniform over a square covering it.
/// Inliers come first, then outliers.
inline LabeledDataset gen_circle(std::size_t n_inliers, double contamination, std::uint64_t seed,
                                 const CircleGeometry& geo = {}) {
  if (n_inliers == 0) throw Error(Errc::InvalidArgument, "n_inliers must be positive");
  const std::size_t n_out = outlier_count_for(n_inliers, contamination);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> radial(0.0, geo.radius_sd);
  std::uniform_real_distribution<double> box(-geo.box_half_width, geo.box_half_width);

  std::vector<double> xy;
  xy.reserve(2 * (n_inliers + n_out));
  for (std::size_t i = 0; i < n_inliers; ++i) {
    const double t = angle(rng);
    const double r = geo.radius + radial(rng);
    xy.push_back(r * std::cos(t));
    xy.push_back(r * std::sin(t));
  }
  for (std::size_t i = 0; i < n_out; ++i) {
    const double x = box(rng);
    xy.push_back(x);
    xy.push_back(box(rng));
  }
  return detail::assemble(std::move(xy), n_inliers, n_out, seed, "circle");
}

/// Dataset 2: moon A = (cos t, sin t), moon B = (1 - cos t, 0.5 - sin t), t in [0, pi], plus
/// Gaussian jitter; moon A takes the extra point when n_inliers is odd.
inline LabeledDataset gen_moons(std::size_t n_inliers, double contamination, std::uint64_t seed,
                                const MoonsGeometry& geo = {}) {
  if (n_inliers == 0) throw Error(Errc::InvalidArgument, "n_inliers must be positive");
  const std::size_t n_out = outlier_count_for(n_inliers, contamination);
  const std::size_t n_a = n_inliers - n_inliers / 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> param(0.0, std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, geo.jitter_sd);

  std::vector<double> xy;
  xy.reserve(2 * (n_inliers + n_out));
  for (std::size_t i = 0; i < n_inliers; ++i) {
    const double t = param(rng);
    const bool a = i < n_a;
    const double x = a ? std::cos(t) : 1.0 - std::cos(t);
    const double y = a ? std::sin(t) : 0.5 - std::sin(t);
    const double jx = jitter(rng);
    xy.push_back(x + jx);
    xy.push_back(y + jitter(rng));
  }
  // noiseless moons span [-1, 2] x [-0.5, 1]
  std::uniform_real_distribution<double> bx(-1.0 - geo.box_margin, 2.0 + geo.box_margin);
  std::uniform_real_distribution<double> by(-0.5 - geo.box_margin, 1.0 + geo.box_margin);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double x = bx(rng);
    xy.push_back(x);
    xy.push_back(by(rng));
  }
  return detail::assemble(std::move(xy), n_inliers, n_out, seed, "moons");
}

/// 17 significant digits, enough to read back the identical double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV with header `x0,...,x{d-1}[,label]`; label 0 = inlier, 1 = outlier.
inline std::string to_csv(const LabeledDataset& ds) {
  std::string out;
  const std::size_t d = ds.points.dim();
  for (std::size_t k = 0; k < d; ++k) {
    if (k) out += ',';
    out += "x" + std::to_string(k);
  }
  if (ds.labeled()) out += ",label";
  out += '\n';
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      if (k) out += ',';
      out += format_double(ds.points(i, k));
    }
    if (ds.labeled()) out += ds.labels[i] == Label::Outlier ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses the CSV schema written by `to_csv`. The label column is optional.
inline LabeledDataset from_csv(std::string_view text, std::string name = "csv") {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      const std::size_t nl = text.find('\n', pos);
      line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw Error(Errc::ParseError, "line 1: missing header");
  const auto header = detail::split_fields(line);
  std::size_t d = 0;
  while (d < header.size() && header[d] == "x" + std::to_string(d)) ++d;
  if (d == 0) throw Error(Errc::MissingColumn, "line " + std::to_string(line_no) + ": header must start with x0");
  bool has_label = false;
  if (d < header.size()) {
    if (header[d] == "label" && d + 1 == header.size()) {
      has_label = true;
    } else {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": unexpected column '" +
                                        std::string(header[d]) + "'");
    }
  }
  const std::size_t width = d + (has_label ? 1 : 0);

  std::vector<double> xy;
  std::vector<Label> labels;
  while (next_line(line)) {
    const auto fields = detail::split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != width) {
      throw Error(Errc::ParseError, where + "expected " + std::to_string(width) + " fields, got " +
                                        std::to_string(fields.size()));
    }
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = detail::parse_double(fields[k]);
      if (!v) throw Error(Errc::ParseError, where + "non-numeric coordinate '" + std::string(fields[k]) + "'");
      if (!std::isfinite(*v)) throw Error(Errc::ParseError, where + "non-finite coordinate");
      xy.push_back(*v);
    }
    if (has_label) {
      if (fields[d] == "0") {
        labels.push_back(Label::Inlier);
      } else if (fields[d] == "1") {
        labels.push_back(Label::Outlier);
      } else {
        throw Error(Errc::ParseError, where + "label must be 0 or 1, got '" + std::string(fields[d]) + "'");
      }
    }
  }
  if (xy.empty()) throw Error(Errc::ParseError, "no data rows");

  LabeledDataset ds;
  const std::size_t n = xy.size() / d;
  ds.points = PointSet(n, d, std::move(xy));
  ds.labels = std::move(labels);
  ds.contamination = ds.labeled() ? static_cast<double>(ds.outlier_count()) / static_cast<double>(n) : 0.0;
  ds.name = std::move(name);
  return ds;
}

inline void save_csv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
  f << to_csv(ds);
  if (!f) throw Error(Errc::Io, "write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline LabeledDataset load_csv(const std::string& path) { return from_csv(read_text_file(path), path); }

}  // namespace bsod
