#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mil/harness/train.hpp"

namespace mil::harness {

// Checkpoint document: {"architecture": [layer specs], "layers":
// [{"kernel": [...], "bias": [...]}], "seed": ..., "config": {...}}.
// The execution policy is a runtime choice and is not persisted.
nlohmann::ordered_json checkpoint_to_json(const TrainResult& result);

struct Checkpoint {
  std::vector<ConvLayerSpec> architecture;
  ModelParams params;
  TrainConfig config;  // config.seed also carries the experiment seed
};

Checkpoint checkpoint_from_json(const nlohmann::json& doc);

// JSON-lines metrics log, one {"epoch", "mean_nll", "lr", "wall_ms"} record
// per epoch.
std::string metrics_jsonl(const std::vector<EpochRecord>& epochs);

// Same records without wall_ms: the byte-reproducible projection used for
// determinism checks.
std::string metrics_canonical(const std::vector<EpochRecord>& epochs);

}  // namespace mil::harness
