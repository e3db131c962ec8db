#pragma once

#include "mil/label_set.hpp"
#include "mil/likelihood.hpp"
#include "mil/tensor.hpp"

namespace mil {

inline constexpr double kFiniteDifferenceStep = 1e-5;

struct LogLikelihoodGrad {
  double logprob;
  GradTensor grad;  // same (C+1, M, N) shape as the input tensor
};

// d log Prb(L|P) / d p(c,m,n), every channel including phi. Each
// inclusion-exclusion term alpha_{S ∪ phi} contributes
// sign(S) * alpha / s(m,n) to the channels of S ∪ {phi}, where s(m,n) is
// that term's per-location channel sum; one subset sweep covers all entries.
// Throws ZeroProbabilityError when Prb(L|P) = 0: the log-gradient is
// undefined there.
GradTensor grad_wrt_prob(const LabelSet& set, const ProbTensor& p,
                         int max_subset_order = kDefaultMaxSubsetOrder);

// Chain rule through the per-location softmax:
// d/dz_c = p_c * (g_c - sum_j p_j g_j) with g = grad_wrt_prob(softmax(z)).
GradTensor grad_wrt_logits(const LabelSet& set, const LogitTensor& z,
                           int max_subset_order = kDefaultMaxSubsetOrder);

// Same computation, also returning log Prb for callers that need both.
LogLikelihoodGrad loglik_and_grad_wrt_logits(const LabelSet& set, const LogitTensor& z,
                                             int max_subset_order = kDefaultMaxSubsetOrder);

// Central difference (f(z+h) - f(z-h)) / 2h per logit entry, f = log
// likelihood through the softmax. Oracle for grad_wrt_logits.
GradTensor finite_difference_gradient(const LabelSet& set, const LogitTensor& z,
                                      double step = kFiniteDifferenceStep,
                                      int max_subset_order = kDefaultMaxSubsetOrder);

}  // namespace mil
