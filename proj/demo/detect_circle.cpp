// Generates a small noisy circle, runs the three detectors and prints precision/recall.

#include <cstdio>

#include "bsod/bsod.hpp"

int main() {
  const bsod::LabeledDataset ds = bsod::gen_circle(2000, 0.10, 7);

  bsod::BsodConfig cfg;
  cfg.contamination = ds.contamination;
  const bsod::DetectionResult result = bsod::bsod_detect(ds.points, cfg);

  const auto report = [&](const char* name, const std::vector<std::size_t>& flagged) {
    const auto pr = bsod::precision_recall(flagged, ds.labels);
    std::printf("%-5s flagged=%5zu precision=%.3f recall=%.3f\n", name, flagged.size(), pr.precision, pr.recall);
  };
  report("BSOD", result.outlier_indices);
  report("IF", bsod::flag_top_fraction(bsod::iforest_scores(ds.points), ds.contamination));
  report("LOF", bsod::flag_top_fraction(bsod::lof_scores(ds.points), ds.contamination));
  std::printf("rounds=%zu\n", result.rounds.size());
  return 0;
}
