#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsod/datasets.hpp"
#include "bsod/detector.hpp"
#include "bsod/error.hpp"

namespace bsod {

/// One line of a detection results file: `index,score,flagged`.
struct PointResult {
  std::size_t index = 0;
  double score = 0.0;
  bool flagged = false;

  bool operator==(const PointResult&) const = default;
};

inline std::vector<PointResult> make_results(std::span<const double> scores, std::span<const std::size_t> flagged) {
  std::vector<PointResult> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = {i, scores[i], false};
  for (std::size_t i : flagged) out.at(i).flagged = true;
  return out;
}

inline std::string results_to_csv(std::span<const PointResult> results) {
  std::string out = "index,score,flagged\n";
  for (const auto& r : results) {
    out += std::to_string(r.index) + ',' + format_double(r.score) + (r.flagged ? ",1\n" : ",0\n");
  }
  return out;
}

inline std::vector<PointResult> results_from_csv(std::string_view text) {
  std::vector<PointResult> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto f = detail::split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (header) {
      if (f.size() != 3 || f[0] != "index" || f[1] != "score" || f[2] != "flagged") {
        throw Error(Errc::MissingColumn, where + "expected header index,score,flagged");
      }
      header = false;
      continue;
    }
    if (f.size() != 3) throw Error(Errc::ParseError, where + "expected 3 fields");
    const auto idx = detail::parse_double(f[0]);
    const auto score = detail::parse_double(f[1]);
    if (!idx || !score || (f[2] != "0" && f[2] != "1")) throw Error(Errc::ParseError, where + "malformed row");
    out.push_back({static_cast<std::size_t>(*idx), *score, f[2] == "1"});
  }
  if (header) throw Error(Errc::ParseError, "line 1: missing header");
  if (out.empty()) throw Error(Errc::ParseError, "no data rows");
  return out;
}

inline nlohmann::json to_json(const RoundTrace& t) {
  return {{"round_index", t.round_index},
          {"input_size", t.input_size},
          {"removed_indices", t.removed_indices},
          {"kept_size", t.kept_size},
          {"eigenvalue", t.eigenvalue},
          {"eigen_iterations", t.eigen_iterations},
          {"eigen_converged", t.eigen_converged},
          {"cluster_sizes", {t.cluster_sizes[0], t.cluster_sizes[1]}},
          {"degenerate_exit", degenerate_exit_name(t.degenerate_exit)}};
}

inline std::string trace_to_json(std::span<const RoundTrace> rounds) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : rounds) j.push_back(to_json(t));
  return j.dump(2) + '\n';
}

}  // namespace bsod
