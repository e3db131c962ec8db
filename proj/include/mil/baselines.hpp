#pragma once

#include "mil/label_set.hpp"
#include "mil/tensor.hpp"

namespace mil {

// Distribution over all (C+1)*M*N entries jointly: the whole tensor sums to
// 1, unlike ProbTensor's per-location normalization. This is the quantity
// the max-pooling MIL cost is defined on; per-location probabilities make
// that cost trivially minimizable by saturating one location.
class GlobalProbTensor {
 public:
  GlobalProbTensor() = default;
  GlobalProbTensor(int num_classes, int rows, int cols)
      : values_(num_classes + 1, rows, cols) {}

  static GlobalProbTensor from_values(int num_classes, int rows, int cols,
                                      std::vector<double> data) {
    GlobalProbTensor q;
    q.values_ = Tensor3::from_data(num_classes + 1, rows, cols, std::move(data));
    return q;
  }

  int num_classes() const { return values_.channels() - 1; }
  int rows() const { return values_.rows(); }
  int cols() const { return values_.cols(); }

  double at(int channel, int r, int c) const { return values_.at(channel, r, c); }
  double& at(int channel, int r, int c) { return values_.at(channel, r, c); }

  const Tensor3& values() const { return values_; }
  Tensor3& values() { return values_; }

 private:
  Tensor3 values_;
};

// Nonnegativity plus whole-tensor normalization within kNormalizationTolerance.
void validate_global_prob_tensor(const GlobalProbTensor& q);

// One softmax over all entries. Throws NonFiniteInputError.
GlobalProbTensor global_softmax(const LogitTensor& z);

// -(1/|L|) sum over labels of log max_{m,n} q(label, m, n). Throws
// EmptyLabelSetError (undefined for negative bags), LabelOutOfRangeError,
// MaxIsZeroError when a named class has zero mass everywhere.
double traditional_mil_cost(const LabelSet& set, const GlobalProbTensor& q);

struct MilCostGrad {
  double cost;
  GradTensor grad;  // d cost / d logits
};

// Cost and gradient in one pass for training: grad = q minus the average of
// one-hot tensors at each label's maximizing location. Among equal maxima
// the first location in row-major scan order receives the subgradient.
MilCostGrad traditional_mil_cost_grad_wrt_logits(const LabelSet& set, const LogitTensor& z);

// -log p(label, 1, 1) for a 1x1 tensor; the likelihood of {label} reduces to
// exactly this. Throws ShapeNotSingletonError, LabelOutOfRangeError.
double cross_entropy_special_case(int label, const ProbTensor& p);

}  // namespace mil
