#pragma once

#include <vector>

#include <json.hpp>

#include "mil/harness/train.hpp"

namespace mil::harness {

struct EvalMetrics {
  int singleton_count = 0;
  double error_alpha = 0.0;     // exact single-instance rule
  double error_meanpool = 0.0;  // mean-pool rule
  double error_maxlogit = 0.0;  // max-pool score read-out (the baseline's native rule)
  double agreement_alpha_meanpool = 0.0;

  int bag_count = 0;
  double bag_mean_nll = 0.0;
  // Diagnostic mean-pool probability per class, averaged over bags where the
  // class is present / absent. No pass/fail rule attaches to these.
  std::vector<double> presence_present;
  std::vector<double> presence_absent;
};

// Held-out protocol: single-glyph scenes (never seen at train time, which
// only composes glyphs_per_scene glyphs) for classification error, and
// fresh multi-glyph scenes for bag NLL and presence diagnostics. Test
// streams are split from the same experiment seed under tags that training
// never touches.
EvalMetrics evaluate(const ModelParams& params, const TrainConfig& cfg,
                     int singleton_count = 1000, int bag_count = 200,
                     Exec exec = Exec::serial);

nlohmann::ordered_json eval_metrics_to_json(const EvalMetrics& m);

}  // namespace mil::harness
