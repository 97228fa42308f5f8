// Command-line front end: generate datasets, run detectors on CSV data, run the benchmark
// grid and join results with data for plotting.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsod/bsod.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_contamination(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw UsageError("--contamination must lie in (0, 1), got " + std::to_string(c));
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw bsod::Error(bsod::Errc::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw bsod::Error(bsod::Errc::Io, "write to '" + path + "' failed");
}

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

struct GenerateArgs {
  std::string dataset;
  std::size_t n_inliers = 10000;
  double contamination = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  require_contamination(a.contamination);
  if (a.n_inliers == 0) throw UsageError("--n-inliers must be positive");
  const auto kind = bsod::parse_dataset(a.dataset);
  const bsod::LabeledDataset ds = bsod::generate(*kind, a.n_inliers, a.contamination, a.seed);
  bsod::save_csv(ds, a.out);
  std::cout << "rows=" << ds.points.size() << '\n'
            << "outliers=" << ds.outlier_count() << '\n'
            << "contamination=" << bsod::format_double(ds.contamination) << '\n';
  return 0;
}

struct DetectArgs {
  std::string in;
  std::string method;
  double contamination = 0.1;
  double eps = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
  std::size_t k_neighbors = 20;
  std::size_t trees = 100;
  std::string solver = "lanczos";
};

int cmd_detect(const DetectArgs& a) {
  require_contamination(a.contamination);
  if (!(a.eps > 0.0)) throw UsageError("--eps must be positive (InvalidEpsilon), got " + std::to_string(a.eps));
  const auto method = *bsod::parse_method(a.method);
  if (!a.trace.empty() && method != bsod::Method::Bsod) throw UsageError("--trace is only available for --method bsod");

  const bsod::LabeledDataset ds = bsod::load_csv(a.in);
  std::vector<double> scores;
  std::vector<std::size_t> flagged;
  std::vector<bsod::RoundTrace> rounds;
  switch (method) {
    case bsod::Method::Bsod: {
      bsod::BsodConfig cfg;
      cfg.contamination = a.contamination;
      cfg.eps = a.eps;
      cfg.seed = a.seed;
      cfg.eigen_method = a.solver == "power" ? bsod::EigenMethod::Power : bsod::EigenMethod::Lanczos;
      bsod::DetectionResult r = bsod::bsod_detect(ds.points, cfg);
      scores = std::move(r.scores);
      flagged = std::move(r.outlier_indices);
      rounds = std::move(r.rounds);
      break;
    }
    case bsod::Method::IForest:
      scores = bsod::iforest_scores(ds.points, bsod::IForestConfig{a.trees, 256, a.seed});
      flagged = bsod::flag_top_fraction(scores, a.contamination);
      break;
    case bsod::Method::Lof:
      scores = bsod::lof_scores(ds.points, bsod::LofConfig{a.k_neighbors});
      flagged = bsod::flag_top_fraction(scores, a.contamination);
      break;
  }

  write_file(a.out, bsod::results_to_csv(bsod::make_results(scores, flagged)));
  if (!a.trace.empty()) write_file(a.trace, bsod::trace_to_json(rounds));
  if (ds.labeled()) {
    const auto pr = bsod::precision_recall(flagged, ds.labels);
    std::cout << "flagged=" << flagged.size() << '\n'
              << "precision=" << fixed4(pr.precision) << '\n'
              << "recall=" << fixed4(pr.recall) << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out_dir;
  std::size_t seeds = 5;
  bool seeds_given = false;
  std::optional<std::size_t> n_inliers;
};

int cmd_bench(const BenchArgs& a) {
  bsod::GridConfig cfg;
  if (!a.config.empty()) {
    const std::string text = bsod::read_text_file(a.config);
    try {
      cfg = bsod::parse_grid_config(text);
    } catch (const bsod::Error& e) {
      throw UsageError(a.config + ": " + e.what());
    }
  }
  if (a.seeds_given || a.config.empty()) cfg.seeds = a.seeds;
  if (a.n_inliers) cfg.n_inliers = *a.n_inliers;
  if (cfg.seeds == 0) throw UsageError("--seeds must be positive");
  if (cfg.n_inliers == 0) throw UsageError("--n-inliers must be positive");

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec || !fs::is_directory(a.out_dir)) {
    throw bsod::Error(bsod::Errc::Io, "cannot create output directory '" + a.out_dir + "'");
  }
  // fail before the grid runs, not after
  const fs::path dir(a.out_dir);
  write_file((dir / "report.csv").string(), "");

  const bsod::BenchReport report = bsod::run_grid(cfg, [](const bsod::MetricsRow& row) {
    std::cerr << row.dataset << ' ' << bsod::method_label(row.method) << " c=" << row.contamination
              << " seed=" << row.seed;
    if (row.ok()) {
      std::cerr << " precision=" << fixed4(row.precision) << " recall=" << fixed4(row.recall)
                << " ms=" << static_cast<long long>(row.runtime_ms) << '\n';
    } else {
      std::cerr << " error: " << row.error << '\n';
    }
  });

  write_file((dir / "report.csv").string(), bsod::render_report(report, bsod::ReportFormat::Csv));
  const std::string md = bsod::render_report(report, bsod::ReportFormat::Markdown);
  write_file((dir / "report.md").string(), md);
  write_file((dir / "report.json").string(), bsod::render_report(report, bsod::ReportFormat::Json));
  std::cout << md;

  std::size_t failed = 0;
  for (const auto& r : report.rows) failed += r.ok() ? 0 : 1;
  if (failed == report.rows.size()) {
    std::cerr << "every cell failed\n";
    return kExitRuntime;
  }
  return 0;
}

struct PlotArgs {
  std::string in;
  std::string results;
  std::string out;
};

int cmd_plot_data(const PlotArgs& a) {
  const bsod::LabeledDataset ds = bsod::load_csv(a.in);
  const auto results = bsod::results_from_csv(bsod::read_text_file(a.results));
  if (results.size() != ds.points.size()) {
    throw bsod::Error(bsod::Errc::RowCountMismatch, "dataset has " + std::to_string(ds.points.size()) +
                                                        " rows but results have " + std::to_string(results.size()));
  }
  std::string text = "x0,x1,true_label,flagged\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.index >= ds.points.size()) {
      throw bsod::Error(bsod::Errc::ParseError, "result index " + std::to_string(r.index) + " out of range");
    }
    text += bsod::format_double(ds.points(r.index, 0)) + ',';
    if (ds.points.dim() > 1) text += bsod::format_double(ds.points(r.index, 1));
    text += ',';
    if (ds.labeled()) text += ds.labels[r.index] == bsod::Label::Outlier ? "1" : "0";
    text += r.flagged ? ",1\n" : ",0\n";
  }
  write_file(a.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boosted spectral outlier detection toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic labeled dataset as CSV");
  generate->add_option("--dataset", gen.dataset, "Dataset geometry")
      ->required()
      ->check(CLI::IsMember({"circle", "moons"}));
  generate->add_option("--n-inliers", gen.n_inliers, "Number of inliers")->capture_default_str();
  generate->add_option("--contamination", gen.contamination, "Outlier fraction of the total, in (0, 1)")->required();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output CSV path")->required();

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Run a detector on a CSV dataset");
  detect->add_option("--in", det.in, "Input CSV (x0,...[,label])")->required();
  detect->add_option("--method", det.method, "Detector")->required()->check(CLI::IsMember({"bsod", "lof", "iforest"}));
  detect->add_option("--contamination", det.contamination, "Assumed outlier fraction, in (0, 1)")->required();
  detect->add_option("--eps", det.eps, "Neighborhood radius for bsod")->capture_default_str();
  detect->add_option("--seed", det.seed, "Random seed")->capture_default_str();
  detect->add_option("--out", det.out, "Output CSV: index,score,flagged")->required();
  detect->add_option("--trace", det.trace, "Write per-round JSON trace (bsod only)");
  detect->add_option("--k-neighbors", det.k_neighbors, "LOF neighbourhood size")->capture_default_str();
  detect->add_option("--trees", det.trees, "Isolation forest size")->capture_default_str();
  detect->add_option("--solver", det.solver, "Eigensolver for bsod")
      ->capture_default_str()
      ->check(CLI::IsMember({"lanczos", "power"}));

  BenchArgs bench;
  std::size_t bench_n_inliers = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run the precision/recall benchmark grid");
  bench_cmd->add_option("--config", bench.config, "Grid config (key = value lines)");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for report.csv/md/json")->required();
  auto* seeds_opt = bench_cmd->add_option("--seeds", bench.seeds, "Seeds per grid cell")->capture_default_str();
  auto* n_opt = bench_cmd->add_option("--n-inliers", bench_n_inliers, "Override the number of inliers");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot-data", "Join a dataset with detection results for plotting");
  plot_cmd->add_option("--in", plot.in, "Dataset CSV")->required();
  plot_cmd->add_option("--results", plot.results, "Results CSV from detect")->required();
  plot_cmd->add_option("--out", plot.out, "Output CSV: x0,x1,true_label,flagged")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (detect->parsed()) return cmd_detect(det);
    if (bench_cmd->parsed()) {
      bench.seeds_given = seeds_opt->count() > 0;
      if (n_opt->count() > 0) bench.n_inliers = bench_n_inliers;
      return cmd_bench(bench);
    }
    if (plot_cmd->parsed()) return cmd_plot_data(plot);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
