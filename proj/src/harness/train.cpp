#include "mil/harness/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "mil/baselines.hpp"
#include "mil/errors.hpp"
#include "mil/gradient.hpp"

namespace mil::harness {

const char* loss_name(Loss loss) {
  return loss == Loss::exact_nll ? "exact_nll" : "traditional_mil";
}

Loss loss_from_name(const std::string& name) {
  if (name == "exact_nll") return Loss::exact_nll;
  if (name == "traditional_mil") return Loss::traditional_mil;
  throw Error("unknown loss \"" + name + "\" (exact_nll|traditional_mil)");
}

void validate_config(const TrainConfig& cfg) {
  if (cfg.num_classes < 1) throw Error("config: num_classes must be >= 1");
  if (cfg.epochs < 2) throw Error("config: epochs must be >= 2");
  if (cfg.batch_size < 1) throw Error("config: batch_size must be >= 1");
  if (cfg.train_size < 1) throw Error("config: train_size must be >= 1");
  if (!(cfg.lr_first > 0.0) || !(cfg.lr_second > 0.0))
    throw Error("config: learning rates must be positive");
  if (cfg.glyph_size > cfg.canvas)
    throw GlyphTooLargeForCanvasError(cfg.glyph_size, cfg.canvas, cfg.canvas);
  if (cfg.glyphs_per_scene < 0) throw Error("config: glyphs_per_scene must be >= 0");
}

double epoch_lr(const TrainConfig& cfg, int epoch_index) {
  return epoch_index < (cfg.epochs + 1) / 2 ? cfg.lr_first : cfg.lr_second;
}

namespace {

// Shared batch loop: fetch(i) yields (sample, dataset index) so the trainer
// can hand in shuffled views without copying scenes.
template <typename Fetch>
BatchObjective batch_objective(const ModelParams& params, std::size_t count, Fetch fetch,
                               Loss loss, Exec exec) {
  std::vector<double> costs(count);
  std::vector<ModelGrad> grads(count);
  parallel_for(exec, count, [&](std::size_t i) {
    auto [sample, index] = fetch(i);
    ForwardCache cache;
    LogitTensor z = model_forward(params, sample->image, &cache);
    if (loss == Loss::exact_nll) {
      LogLikelihoodGrad lg;
      try {
        lg = loglik_and_grad_wrt_logits(sample->label, z);
      } catch (const ZeroProbabilityError&) {
        throw ZeroProbabilitySampleError(index);
      }
      costs[i] = -lg.logprob;
      // model_backward is linear in dlogits; negate afterwards via scale
      grads[i] = model_backward(params, cache, lg.grad);
    } else {
      MilCostGrad mg = traditional_mil_cost_grad_wrt_logits(sample->label, z);
      costs[i] = mg.cost;
      grads[i] = model_backward(params, cache, mg.grad);
    }
  });

  BatchObjective out;
  out.grad = zero_like(params);
  const double w = 1.0 / double(count);
  const double grad_sign = loss == Loss::exact_nll ? -w : w;
  for (std::size_t i = 0; i < count; ++i) {
    out.mean_cost += w * costs[i];
    accumulate(out.grad, grads[i], grad_sign);
  }
  return out;
}

}  // namespace

BatchObjective nll_objective(const ModelParams& params, std::span<const SceneSample> batch,
                             Exec exec, std::size_t index_base) {
  if (batch.empty()) throw Error("empty batch");
  return batch_objective(
      params, batch.size(),
      [&](std::size_t i) { return std::pair(&batch[i], index_base + i); },
      Loss::exact_nll, exec);
}

TrainResult train(const TrainConfig& cfg) {
  validate_config(cfg);
  auto glyphs = make_glyph_set(cfg.num_classes, cfg.glyph_size);
  Rng root(cfg.seed);

  TrainResult result;
  result.architecture = default_architecture(cfg.num_classes);
  result.config = cfg;
  Rng init_rng = root.split(kInitStream);
  result.params = init_params(result.architecture, init_rng);

  std::vector<SceneSample> data =
      generate_scenes(root.split(kTrainSceneStream), cfg.train_size, glyphs,
                      cfg.glyphs_per_scene, cfg.canvas, cfg.canvas, cfg.exec);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    const double lr = epoch_lr(cfg, epoch);

    Rng shuffle_rng = root.split(kShuffleStream).split(std::uint64_t(epoch));
    for (std::size_t i = order.size() - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.below(i + 1)]);

    double cost_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += std::size_t(cfg.batch_size)) {
      const std::size_t count = std::min(std::size_t(cfg.batch_size), order.size() - start);
      BatchObjective obj = batch_objective(
          result.params, count,
          [&](std::size_t i) { return std::pair(&data[order[start + i]], order[start + i]); },
          cfg.loss, cfg.exec);
      sgd_step(result.params, obj.grad, lr);
      cost_sum += obj.mean_cost * double(count);
    }

    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.mean_nll = cost_sum / double(order.size());
    rec.lr = lr;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    result.epochs.push_back(rec);

    const double initial = result.epochs.front().mean_nll;
    if (!(rec.mean_nll <= 10.0 * initial)) throw DivergedObjectiveError(rec.mean_nll, initial);
  }
  return result;
}

}  // namespace mil::harness
