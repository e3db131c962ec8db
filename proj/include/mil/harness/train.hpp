#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mil/exec.hpp"
#include "mil/harness/model.hpp"
#include "mil/harness/scene.hpp"

namespace mil::harness {

// Training objective: the exact bag log-likelihood, or the max-pooling
// baseline cost over a globally normalized softmax.
enum class Loss { exact_nll, traditional_mil };

const char* loss_name(Loss loss);
Loss loss_from_name(const std::string& name);

struct TrainConfig {
  int num_classes = 5;
  int canvas = 24;  // square H = W
  int glyph_size = 8;
  int glyphs_per_scene = 2;
  int train_size = 6000;
  int epochs = 20;
  int batch_size = 64;
  double lr_first = 0.01;   // first half of the epochs
  double lr_second = 0.001; // second half
  std::uint64_t seed = 7;
  Loss loss = Loss::exact_nll;
  Exec exec = Exec::serial;
};

void validate_config(const TrainConfig& cfg);

// Stream tags under the experiment seed. Training touches only the first
// three; evaluation derives held-out data from the last two, so test scenes
// are disjoint from training scenes by construction.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kTrainSceneStream = 2;
inline constexpr std::uint64_t kShuffleStream = 3;
inline constexpr std::uint64_t kTestSingletonStream = 4;
inline constexpr std::uint64_t kTestBagStream = 5;

struct EpochRecord {
  int epoch = 0;  // 1-based
  double mean_nll = 0.0;
  double lr = 0.0;
  double wall_ms = 0.0;  // measured; excluded from determinism comparisons
};

struct TrainResult {
  std::vector<ConvLayerSpec> architecture;
  ModelParams params;
  std::vector<EpochRecord> epochs;
  TrainConfig config;
};

struct BatchObjective {
  double mean_cost = 0.0;
  ModelGrad grad;
};

// Mean over the batch of -log Prb(label | softmax(model(image))) and its
// parameter gradient. Per-sample gradients reduce in batch order under
// either execution policy. Throws ZeroProbabilitySampleError(index_base + i)
// when sample i has zero likelihood.
BatchObjective nll_objective(const ModelParams& params, std::span<const SceneSample> batch,
                             Exec exec = Exec::serial, std::size_t index_base = 0);

// 0-based epoch; the first ceil(epochs/2) epochs use lr_first.
double epoch_lr(const TrainConfig& cfg, int epoch_index);

// SGD over shuffled epochs. Deterministic for a fixed config. Throws
// DivergedObjectiveError when an epoch's mean cost exceeds 10x epoch 1's.
TrainResult train(const TrainConfig& cfg);

}  // namespace mil::harness
