#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsod/baselines.hpp"
#include "bsod/datasets.hpp"
#include "bsod/detector.hpp"
#include "bsod/error.hpp"

namespace bsod {

enum class Method { Bsod, IForest, Lof };
enum class DatasetKind { Circle, Moons };
enum class ReportFormat { Csv, Markdown, Json };

constexpr std::string_view method_label(Method m) noexcept {
  switch (m) {
    case Method::Bsod: return "BSOD";
    case Method::IForest: return "IF";
    case Method::Lof: return "LOF";
  }
  return "?";
}

constexpr std::string_view method_key(Method m) noexcept {
  switch (m) {
    case Method::Bsod: return "bsod";
    case Method::IForest: return "iforest";
    case Method::Lof: return "lof";
  }
  return "?";
}

/// Accepts the CLI keys (bsod, iforest, lof) and the report labels (BSOD, IF, LOF).
inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::Bsod, Method::IForest, Method::Lof}) {
    if (s == method_key(m) || s == method_label(m)) return m;
  }
  return std::nullopt;
}

constexpr std::string_view dataset_name(DatasetKind k) noexcept {
  return k == DatasetKind::Circle ? "circle" : "moons";
}

inline std::optional<DatasetKind> parse_dataset(std::string_view s) {
  if (s == "circle") return DatasetKind::Circle;
  if (s == "moons") return DatasetKind::Moons;
  return std::nullopt;
}

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// precision = TP / |flagged| (0 when nothing is flagged), recall = TP / |true outliers|.
inline PrecisionRecall precision_recall(std::span<const std::size_t> flagged, std::span<const Label> labels) {
  std::size_t positives = 0;
  for (Label l : labels) positives += l == Label::Outlier ? 1 : 0;
  if (positives == 0) throw Error(Errc::NoTrueOutliers, "recall is undefined without true outliers");
  std::vector<bool> seen(labels.size(), false);
  std::size_t tp = 0;
  std::size_t count = 0;
  for (std::size_t i : flagged) {
    if (i >= labels.size()) throw Error(Errc::InvalidArgument, "flagged index " + std::to_string(i) + " out of range");
    if (seen[i]) continue;
    seen[i] = true;
    ++count;
    tp += labels[i] == Label::Outlier ? 1 : 0;
  }
  PrecisionRecall pr;
  pr.precision = count == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(count);
  pr.recall = static_cast<double>(tp) / static_cast<double>(positives);
  return pr;
}

struct MetricsRow {
  std::string dataset;
  Method method = Method::Bsod;
  double contamination = 0.0;
  std::uint64_t seed = 0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t flagged_count = 0;
  double runtime_ms = 0.0;
  /// Empty on success.
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct Aggregate {
  std::string dataset;
  Method method = Method::Bsod;
  double contamination = 0.0;
  std::size_t seeds = 0;
  std::size_t failures = 0;
  std::optional<double> precision_mean;
  std::optional<double> precision_sd;
  std::optional<double> recall_mean;
  std::optional<double> recall_sd;

  bool operator==(const Aggregate&) const = default;
};

struct BenchReport {
  std::vector<MetricsRow> rows;
  std::vector<Aggregate> aggregate;

  const Aggregate* find(std::string_view dataset, Method method, double contamination) const {
    for (const auto& a : aggregate) {
      if (a.dataset == dataset && a.method == method && std::abs(a.contamination - contamination) < 1e-12) return &a;
    }
    return nullptr;
  }
};

struct GridConfig {
  std::vector<DatasetKind> datasets{DatasetKind::Circle, DatasetKind::Moons};
  std::vector<double> contaminations{0.01, 0.05, 0.10, 0.15};
  std::vector<Method> methods{Method::Bsod, Method::IForest, Method::Lof};
  std::size_t n_inliers = 10000;
  std::size_t seeds = 5;
  std::uint64_t base_seed = 0;
  double eps = 0.5;
  std::size_t lof_k = 20;
  std::size_t trees = 100;
  EigenMethod eigen_method = EigenMethod::Lanczos;
  CircleGeometry circle;
  MoonsGeometry moons;
};

namespace detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (std::string_view f : split_fields(s)) {
    if (!f.empty()) out.emplace_back(f);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(Errc::ParseError, "bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return v;
}

inline std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace detail

/// Flat `key = value` text; `#` starts a comment. Lists are comma separated.
///
///   datasets = circle, moons
///   contaminations = 0.01, 0.05, 0.10, 0.15
///   methods = bsod, iforest, lof
///   n_inliers = 10000
///   seeds = 5
///   base_seed = 0
///   eps = 0.5
inline GridConfig parse_grid_config(std::string_view text) {
  GridConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(Errc::ParseError, where + "expected key = value");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    try {
      if (key == "datasets") {
        cfg.datasets.clear();
        for (const auto& s : detail::split_list(value)) {
          const auto k = parse_dataset(s);
          if (!k) throw Error(Errc::ParseError, "unknown dataset '" + s + "' (valid: circle, moons)");
          cfg.datasets.push_back(*k);
        }
      } else if (key == "contaminations") {
        cfg.contaminations.clear();
        for (const auto& s : detail::split_list(value)) {
          const double c = detail::parse_number<double>(key, s);
          if (!(c > 0.0 && c < 1.0)) throw Error(Errc::InvalidContamination, "contamination " + s + " outside (0, 1)");
          cfg.contaminations.push_back(c);
        }
      } else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& s : detail::split_list(value)) {
          const auto m = parse_method(s);
          if (!m) throw Error(Errc::ParseError, "unknown method '" + s + "' (valid: bsod, iforest, lof)");
          cfg.methods.push_back(*m);
        }
      } else if (key == "n_inliers") {
        cfg.n_inliers = detail::parse_number<std::size_t>(key, value);
      } else if (key == "seeds") {
        cfg.seeds = detail::parse_number<std::size_t>(key, value);
      } else if (key == "base_seed") {
        cfg.base_seed = detail::parse_number<std::uint64_t>(key, value);
      } else if (key == "eps") {
        cfg.eps = detail::parse_number<double>(key, value);
      } else {
        throw Error(Errc::ParseError, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  if (cfg.datasets.empty() || cfg.contaminations.empty() || cfg.methods.empty() || cfg.seeds == 0 ||
      cfg.n_inliers == 0) {
    throw Error(Errc::InvalidArgument, "grid config describes an empty grid");
  }
  if (!(cfg.eps > 0.0)) throw Error(Errc::InvalidEpsilon, "eps must be positive");
  return cfg;
}

inline LabeledDataset generate(DatasetKind kind, std::size_t n_inliers, double contamination, std::uint64_t seed,
                               const GridConfig& cfg = {}) {
  return kind == DatasetKind::Circle ? gen_circle(n_inliers, contamination, seed, cfg.circle)
                                     : gen_moons(n_inliers, contamination, seed, cfg.moons);
}

/// Flagged set of one method on one dataset, given the dataset's realized contamination.
inline std::vector<std::size_t> run_method(Method method, const LabeledDataset& ds, std::uint64_t seed,
                                           const GridConfig& cfg) {
  const double c = ds.contamination;
  switch (method) {
    case Method::Bsod: {
      BsodConfig bc;
      bc.contamination = c;
      bc.eps = cfg.eps;
      bc.seed = seed;
      bc.eigen_method = cfg.eigen_method;
      return bsod_detect(ds.points, bc).outlier_indices;
    }
    case Method::IForest:
      return flag_top_fraction(iforest_scores(ds.points, IForestConfig{cfg.trees, 256, seed}), c);
    case Method::Lof:
      return flag_top_fraction(lof_scores(ds.points, LofConfig{cfg.lof_k}), c);
  }
  return {};
}

inline std::vector<Aggregate> aggregate_rows(const std::vector<MetricsRow>& rows, const GridConfig& cfg) {
  std::vector<Aggregate> out;
  for (DatasetKind kind : cfg.datasets) {
    for (Method m : cfg.methods) {
      for (double c : cfg.contaminations) {
        Aggregate a;
        a.dataset = std::string(dataset_name(kind));
        a.method = m;
        a.contamination = c;
        std::vector<double> p;
        std::vector<double> r;
        for (const auto& row : rows) {
          if (row.dataset != a.dataset || row.method != m || row.contamination != c) continue;
          if (!row.ok()) {
            ++a.failures;
            continue;
          }
          p.push_back(row.precision);
          r.push_back(row.recall);
        }
        a.seeds = p.size();
        auto stats = [](const std::vector<double>& v, std::optional<double>& mean, std::optional<double>& sd) {
          if (v.empty()) return;
          double s = 0.0;
          for (double x : v) s += x;
          const double mu = s / static_cast<double>(v.size());
          mean = mu;
          if (v.size() < 2) return;
          double ss = 0.0;
          for (double x : v) ss += (x - mu) * (x - mu);
          sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        };
        stats(p, a.precision_mean, a.precision_sd);
        stats(r, a.recall_mean, a.recall_sd);
        out.push_back(std::move(a));
      }
    }
  }
  return out;
}

/// Runs every (dataset, contamination, seed, method) cell. A failing cell is recorded in its
/// row and does not stop the grid. Seeds are base_seed, base_seed + 1, ...
inline BenchReport run_grid(const GridConfig& cfg, const std::function<void(const MetricsRow&)>& progress = {}) {
  BenchReport report;
  for (DatasetKind kind : cfg.datasets) {
    for (double c : cfg.contaminations) {
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        const std::uint64_t seed = cfg.base_seed + s;
        std::optional<LabeledDataset> ds;
        std::string gen_error;
        try {
          ds = generate(kind, cfg.n_inliers, c, seed, cfg);
        } catch (const std::exception& e) {
          gen_error = e.what();
        }
        for (Method m : cfg.methods) {
          MetricsRow row;
          row.dataset = std::string(dataset_name(kind));
          row.method = m;
          row.contamination = c;
          row.seed = seed;
          if (!ds) {
            row.error = gen_error;
          } else {
            try {
              const auto t0 = std::chrono::steady_clock::now();
              const auto flagged = run_method(m, *ds, seed, cfg);
              const auto t1 = std::chrono::steady_clock::now();
              row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
              const auto pr = precision_recall(flagged, ds->labels);
              row.precision = pr.precision;
              row.recall = pr.recall;
              row.flagged_count = flagged.size();
            } catch (const std::exception& e) {
              row.error = e.what();
            }
          }
          if (progress) progress(row);
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  report.aggregate = aggregate_rows(report.rows, cfg);
  return report;
}

namespace detail {

inline std::string opt2(const std::optional<double>& v) { return v ? fixed2(*v) : std::string(); }

inline std::string render_csv(const BenchReport& report) {
  std::string out = "dataset,method,contamination,seeds,failures,precision_mean,precision_sd,recall_mean,recall_sd\n";
  for (const auto& a : report.aggregate) {
    out += a.dataset + ',' + std::string(method_label(a.method)) + ',' + short_number(a.contamination) + ',' +
           std::to_string(a.seeds) + ',' + std::to_string(a.failures) + ',' + opt2(a.precision_mean) + ',' +
           opt2(a.precision_sd) + ',' + opt2(a.recall_mean) + ',' + opt2(a.recall_sd) + '\n';
  }
  return out;
}

inline std::string cell_text(const std::optional<double>& mean, const std::optional<double>& sd) {
  if (!mean) return "n/a";
  return sd ? fixed2(*mean) + " ± " + fixed2(*sd) : fixed2(*mean);
}

inline std::string render_markdown(const BenchReport& report) {
  // keep first-seen order for datasets, methods and contaminations
  auto push_unique = [](auto& v, const auto& x) {
    for (const auto& y : v) {
      if (y == x) return;
    }
    v.push_back(x);
  };
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  std::vector<double> cs;
  for (const auto& a : report.aggregate) {
    push_unique(datasets, a.dataset);
    push_unique(methods, a.method);
    push_unique(cs, a.contamination);
  }
  std::string out;
  for (const auto& ds : datasets) {
    if (!out.empty()) out += '\n';
    out += "### Results on " + ds + "\n\n|     |";
    for (double c : cs) out += " c = " + short_number(c * 100.0) + "% | |";
    out += "\n|-----|";
    for (std::size_t i = 0; i < cs.size(); ++i) out += "---|---|";
    out += "\n|     |";
    for (std::size_t i = 0; i < cs.size(); ++i) out += " Precision | Recall |";
    out += '\n';
    for (Method m : methods) {
      out += "| " + std::string(method_label(m)) + " |";
      for (double c : cs) {
        const Aggregate* a = report.find(ds, m, c);
        if (a == nullptr) {
          out += " | |";
          continue;
        }
        out += ' ' + cell_text(a->precision_mean, a->precision_sd) + " | " + cell_text(a->recall_mean, a->recall_sd) +
               " |";
      }
      out += '\n';
    }
  }
  return out;
}

inline nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::string render_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json j{{"dataset", r.dataset},
                     {"method", method_label(r.method)},
                     {"contamination", r.contamination},
                     {"seed", r.seed},
                     {"precision", r.precision},
                     {"recall", r.recall},
                     {"flagged_count", r.flagged_count},
                     {"runtime_ms", r.runtime_ms}};
    if (!r.ok()) j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  nlohmann::json agg = nlohmann::json::array();
  for (const auto& a : report.aggregate) {
    agg.push_back({{"dataset", a.dataset},
                   {"method", method_label(a.method)},
                   {"contamination", a.contamination},
                   {"seeds", a.seeds},
                   {"failures", a.failures},
                   {"precision_mean", optional_json(a.precision_mean)},
                   {"precision_sd", optional_json(a.precision_sd)},
                   {"recall_mean", optional_json(a.recall_mean)},
                   {"recall_sd", optional_json(a.recall_sd)}});
  }
  return nlohmann::json{{"rows", rows}, {"aggregate", agg}}.dump(2) + '\n';
}

}  // namespace detail

/// Metrics are printed with two decimals in csv and markdown; json keeps full precision and
/// the per-seed rows (including runtimes, which are left out of csv so it is reproducible).
inline std::string render_report(const BenchReport& report, ReportFormat format) {
  if (report.aggregate.empty()) throw Error(Errc::EmptyReport, "nothing to render");
  switch (format) {
    case ReportFormat::Csv: return detail::render_csv(report);
    case ReportFormat::Markdown: return detail::render_markdown(report);
    case ReportFormat::Json: return detail::render_json(report);
  }
  return {};
}

/// Reads the aggregate block back from `render_report(..., ReportFormat::Csv)`.
inline std::vector<Aggregate> parse_report_csv(std::string_view text) {
  std::vector<Aggregate> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (f.size() != 9) throw Error(Errc::ParseError, where + "expected 9 fields");
    if (header) {
      if (f[0] != "dataset") throw Error(Errc::MissingColumn, where + "missing report header");
      header = false;
      continue;
    }
    Aggregate a;
    a.dataset = std::string(f[0]);
    const auto m = parse_method(f[1]);
    if (!m) throw Error(Errc::ParseError, where + "unknown method");
    a.method = *m;
    auto num = [&](std::string_view s) {
      const auto v = detail::parse_double(s);
      if (!v) throw Error(Errc::ParseError, where + "bad number '" + std::string(s) + "'");
      return *v;
    };
    auto opt = [&](std::string_view s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return num(s);
    };
    a.contamination = num(f[2]);
    a.seeds = static_cast<std::size_t>(num(f[3]));
    a.failures = static_cast<std::size_t>(num(f[4]));
    a.precision_mean = opt(f[5]);
    a.precision_sd = opt(f[6]);
    a.recall_mean = opt(f[7]);
    a.recall_sd = opt(f[8]);
    out.push_back(std::move(a));
  }
  if (header) throw Error(Errc::ParseError, "missing report header");
  return out;
}

}  // namespace bsod
