#include "mil/baselines.hpp"

#include <cmath>
#include <limits>

#include "mil/errors.hpp"

namespace mil {

void validate_global_prob_tensor(const GlobalProbTensor& q) {
  double total = 0.0;
  for (int ch = 0; ch < q.num_classes() + 1; ++ch)
    for (int r = 0; r < q.rows(); ++r)
      for (int c = 0; c < q.cols(); ++c) {
        double v = q.at(ch, r, c);
        if (!(v >= 0.0)) throw NegativeEntryError(ch + 1, r + 1, c + 1, v);
        total += v;
      }
  if (std::abs(total - 1.0) > kNormalizationTolerance)
    throw Error("tensor total mass is " + std::to_string(total) + ", expected 1");
}

GlobalProbTensor global_softmax(const LogitTensor& z) {
  for (double v : z.values().data())
    if (!std::isfinite(v)) throw NonFiniteInputError("non-finite logit");

  double max = -std::numeric_limits<double>::infinity();
  for (double v : z.values().data()) max = std::max(max, v);

  GlobalProbTensor q(z.num_classes(), z.rows(), z.cols());
  double total = 0.0;
  auto in = z.values().data();
  auto out = q.values().data();
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::exp(in[i] - max);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return q;
}

namespace {

struct ChannelMax {
  double value;
  int row, col;
};

// Max over locations of one channel; first maximum in row-major scan order.
ChannelMax channel_max(const GlobalProbTensor& q, int channel) {
  ChannelMax best{-1.0, 0, 0};
  for (int r = 0; r < q.rows(); ++r)
    for (int c = 0; c < q.cols(); ++c)
      if (q.at(channel, r, c) > best.value) best = {q.at(channel, r, c), r, c};
  return best;
}

void check_labels(const LabelSet& set, int num_classes) {
  if (set.empty()) throw EmptyLabelSetError();
  if (set.max_label() > num_classes)
    throw LabelOutOfRangeError(set.max_label(), num_classes);
}

}  // namespace

double traditional_mil_cost(const LabelSet& set, const GlobalProbTensor& q) {
  check_labels(set, q.num_classes());
  double acc = 0.0;
  for (int label : set.labels()) {
    double best = channel_max(q, label - 1).value;
    if (best <= 0.0) throw MaxIsZeroError(label);
    acc -= std::log(best);
  }
  return acc / double(set.size());
}

MilCostGrad traditional_mil_cost_grad_wrt_logits(const LabelSet& set, const LogitTensor& z) {
  GlobalProbTensor q = global_softmax(z);
  check_labels(set, q.num_classes());

  // cost = (1/|L|) sum_l (lse(z) - z[l, argmax]); d lse / d z = q, and each
  // picked entry gets -1/|L|, so grad = q - mean of one-hots.
  MilCostGrad out{0.0, GradTensor(q.num_classes() + 1, q.rows(), q.cols(), 0.0)};
  const double w = 1.0 / double(set.size());
  for (int label : set.labels()) {
    ChannelMax best = channel_max(q, label - 1);
    if (best.value <= 0.0) throw MaxIsZeroError(label);
    out.cost -= w * std::log(best.value);
    out.grad.at(label - 1, best.row, best.col) -= w;
  }
  auto grad = out.grad.data();
  auto probs = q.values().data();
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += probs[i];
  return out;
}

double cross_entropy_special_case(int label, const ProbTensor& p) {
  if (p.rows() != 1 || p.cols() != 1) throw ShapeNotSingletonError(p.rows(), p.cols());
  if (label < 1 || label > p.num_classes())
    throw LabelOutOfRangeError(label, p.num_classes());
  validate_prob_tensor(p);
  return -std::log(p.at(label - 1, 0, 0));
}

}  // namespace mil
