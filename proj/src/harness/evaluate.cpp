#include "mil/harness/evaluate.hpp"

#include <cmath>

#include "mil/decode.hpp"
#include "mil/likelihood.hpp"

namespace mil::harness {

namespace {

// argmax over classes of the per-channel max logit; phi never predicted,
// ties to the smallest label.
int classify_maxlogit(const LogitTensor& z) {
  int best = 1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int label = 1; label <= z.num_classes(); ++label) {
    double score = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < z.rows(); ++r)
      for (int c = 0; c < z.cols(); ++c) score = std::max(score, z.at(label - 1, r, c));
    if (score > best_score) {
      best_score = score;
      best = label;
    }
  }
  return best;
}

struct SingletonOutcome {
  int truth = 0;
  int pred_alpha = 0, pred_mean = 0, pred_max = 0;
};

struct BagOutcome {
  double nll = 0.0;
  std::vector<double> meanpool;  // per class
  std::vector<int> present;      // per class 0/1
};

}  // namespace

EvalMetrics evaluate(const ModelParams& params, const TrainConfig& cfg,
                     int singleton_count, int bag_count, Exec exec) {
  auto glyphs = make_glyph_set(cfg.num_classes, cfg.glyph_size);
  Rng root(cfg.seed);
  const int C = cfg.num_classes;

  EvalMetrics m;
  m.singleton_count = singleton_count;
  m.bag_count = bag_count;

  {
    auto scenes = generate_scenes(root.split(kTestSingletonStream), singleton_count, glyphs,
                                  1, cfg.canvas, cfg.canvas, exec);
    std::vector<SingletonOutcome> outcomes(scenes.size());
    parallel_for(exec, scenes.size(), [&](std::size_t i) {
      LogitTensor z = model_forward(params, scenes[i].image);
      ProbTensor p = softmax_locations(z);
      outcomes[i] = {scenes[i].label.labels().front(), classify_alpha(p), classify_meanpool(p),
                     classify_maxlogit(z)};
    });
    int wrong_alpha = 0, wrong_mean = 0, wrong_max = 0, agree = 0;
    for (const SingletonOutcome& o : outcomes) {
      wrong_alpha += o.pred_alpha != o.truth;
      wrong_mean += o.pred_mean != o.truth;
      wrong_max += o.pred_max != o.truth;
      agree += o.pred_alpha == o.pred_mean;
    }
    m.error_alpha = double(wrong_alpha) / double(singleton_count);
    m.error_meanpool = double(wrong_mean) / double(singleton_count);
    m.error_maxlogit = double(wrong_max) / double(singleton_count);
    m.agreement_alpha_meanpool = double(agree) / double(singleton_count);
  }

  if (bag_count > 0) {
    auto scenes = generate_scenes(root.split(kTestBagStream), bag_count, glyphs,
                                  cfg.glyphs_per_scene, cfg.canvas, cfg.canvas, exec);
    std::vector<BagOutcome> outcomes(scenes.size());
    parallel_for(exec, scenes.size(), [&](std::size_t i) {
      LogitTensor z = model_forward(params, scenes[i].image);
      ProbTensor p = softmax_locations(z);
      BagOutcome& o = outcomes[i];
      o.nll = -likelihood_exact(scenes[i].label, p).logprob;
      o.meanpool.resize(C);
      o.present.assign(C, 0);
      for (int label = 1; label <= C; ++label) {
        double acc = 0.0;
        for (int r = 0; r < p.rows(); ++r)
          for (int c = 0; c < p.cols(); ++c) acc += p.at(label - 1, r, c);
        o.meanpool[label - 1] = acc / double(p.rows() * p.cols());
        o.present[label - 1] = scenes[i].label.contains(label) ? 1 : 0;
      }
    });

    m.presence_present.assign(C, 0.0);
    m.presence_absent.assign(C, 0.0);
    std::vector<int> count_present(C, 0), count_absent(C, 0);
    double nll_sum = 0.0;
    for (const BagOutcome& o : outcomes) {
      nll_sum += o.nll;
      for (int c = 0; c < C; ++c) {
        if (o.present[c]) {
          m.presence_present[c] += o.meanpool[c];
          ++count_present[c];
        } else {
          m.presence_absent[c] += o.meanpool[c];
          ++count_absent[c];
        }
      }
    }
    m.bag_mean_nll = nll_sum / double(bag_count);
    for (int c = 0; c < C; ++c) {
      if (count_present[c] > 0) m.presence_present[c] /= double(count_present[c]);
      if (count_absent[c] > 0) m.presence_absent[c] /= double(count_absent[c]);
    }
  }
  return m;
}

nlohmann::ordered_json eval_metrics_to_json(const EvalMetrics& m) {
  return nlohmann::ordered_json{{"singleton_count", m.singleton_count},
                                {"error_alpha", m.error_alpha},
                                {"error_meanpool", m.error_meanpool},
                                {"error_maxlogit", m.error_maxlogit},
                                {"agreement_alpha_meanpool", m.agreement_alpha_meanpool},
                                {"bag_count", m.bag_count},
                                {"bag_mean_nll", m.bag_mean_nll},
                                {"presence_present", m.presence_present},
                                {"presence_absent", m.presence_absent}};
}

}  // namespace mil::harness
