#include "mil/gradient.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mil/errors.hpp"
#include "mil/signed_log.hpp"

namespace mil {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ProbGradResult {
  double logprob;
  GradTensor grad;
};

// One subset sweep accumulating the likelihood and every entry's gradient
// numerator in signed-log form, then dividing by the likelihood at the end.
ProbGradResult prob_grad(const LabelSet& set, const ProbTensor& p, int max_subset_order) {
  if (!set.empty() && set.max_label() > p.num_classes())
    throw LabelOutOfRangeError(set.max_label(), p.num_classes());
  const int n = int(set.size());
  if (n > max_subset_order || n > 30)
    throw SubsetOrderExceededError(n, std::min(max_subset_order, 30));
  validate_prob_tensor(p);

  const int rows = p.rows();
  const int cols = p.cols();
  const int locations = rows * cols;
  const int channels = p.num_classes() + 1;
  if (n > locations) throw ZeroProbabilityError();

  SignedLogValue total = SignedLogValue::zero();
  std::vector<SignedLogValue> numer(std::size_t(channels) * locations,
                                    SignedLogValue::zero());
  std::vector<double> logsum(locations);
  std::vector<int> members;  // 0-based channels of S ∪ {phi}
  members.reserve(n + 1);

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    members.clear();
    const auto& labels = set.labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (mask >> i & 1u) members.push_back(labels[i] - 1);
    members.push_back(p.phi_channel());

    double la = 0.0;
    bool zero = false;
    for (int loc = 0; loc < locations; ++loc) {
      double s = 0.0;
      for (int ch : members) s += p.at(ch, loc / cols, loc % cols);
      if (s <= 0.0) {
        zero = true;
        break;
      }
      logsum[loc] = std::log(s);
      la += logsum[loc];
    }
    if (zero) continue;  // alpha = 0: no contribution to value or gradient

    int sign = (n - std::popcount(mask)) % 2 == 0 ? 1 : -1;
    total = sl_add(total, SignedLogValue::from_log_signed(sign, la));
    for (int loc = 0; loc < locations; ++loc) {
      SignedLogValue term = SignedLogValue::from_log_signed(sign, la - logsum[loc]);
      for (int ch : members)
        numer[std::size_t(ch) * locations + loc] =
            sl_add(numer[std::size_t(ch) * locations + loc], term);
    }
  }

  if (total.sign <= 0) throw ZeroProbabilityError();

  ProbGradResult result{total.logmag, GradTensor(channels, rows, cols, 0.0)};
  for (int ch = 0; ch < channels; ++ch)
    for (int loc = 0; loc < locations; ++loc) {
      const SignedLogValue& v = numer[std::size_t(ch) * locations + loc];
      if (v.sign != 0)
        result.grad.at(ch, loc / cols, loc % cols) =
            v.sign * std::exp(v.logmag - total.logmag);
    }
  return result;
}

}  // namespace

GradTensor grad_wrt_prob(const LabelSet& set, const ProbTensor& p, int max_subset_order) {
  return prob_grad(set, p, max_subset_order).grad;
}

LogLikelihoodGrad loglik_and_grad_wrt_logits(const LabelSet& set, const LogitTensor& z,
                                             int max_subset_order) {
  ProbTensor p = softmax_locations(z);
  ProbGradResult inner = prob_grad(set, p, max_subset_order);

  const int channels = p.num_classes() + 1;
  GradTensor out(channels, p.rows(), p.cols(), 0.0);
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) {
      double dot = 0.0;
      for (int ch = 0; ch < channels; ++ch)
        dot += p.at(ch, r, c) * inner.grad.at(ch, r, c);
      for (int ch = 0; ch < channels; ++ch)
        out.at(ch, r, c) = p.at(ch, r, c) * (inner.grad.at(ch, r, c) - dot);
    }
  return {inner.logprob, std::move(out)};
}

GradTensor grad_wrt_logits(const LabelSet& set, const LogitTensor& z, int max_subset_order) {
  return loglik_and_grad_wrt_logits(set, z, max_subset_order).grad;
}

GradTensor finite_difference_gradient(const LabelSet& set, const LogitTensor& z,
                                      double step, int max_subset_order) {
  const int channels = z.num_classes() + 1;
  GradTensor out(channels, z.rows(), z.cols(), 0.0);
  LogitTensor probe = z;
  for (int ch = 0; ch < channels; ++ch)
    for (int r = 0; r < z.rows(); ++r)
      for (int c = 0; c < z.cols(); ++c) {
        double saved = probe.at(ch, r, c);
        probe.at(ch, r, c) = saved + step;
        double hi = likelihood_exact(set, softmax_locations(probe), max_subset_order).logprob;
        probe.at(ch, r, c) = saved - step;
        double lo = likelihood_exact(set, softmax_locations(probe), max_subset_order).logprob;
        probe.at(ch, r, c) = saved;
        if (hi == kNegInf || lo == kNegInf) throw ZeroProbabilityError();
        out.at(ch, r, c) = (hi - lo) / (2.0 * step);
      }
  return out;
}

}  // namespace mil
