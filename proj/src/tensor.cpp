#include "mil/tensor.hpp"

#include <cmath>

namespace mil {

void validate_prob_tensor(const ProbTensor& p) {
  const int channels = p.num_classes() + 1;
  for (int r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < p.cols(); ++c) {
      double sum = 0.0;
      for (int ch = 0; ch < channels; ++ch) {
        const double v = p.at(ch, r, c);
        if (!(v >= 0.0)) throw NegativeEntryError(ch + 1, r + 1, c + 1, v);
        sum += v;
      }
      if (std::abs(sum - 1.0) > kNormalizationTolerance)
        throw UnnormalizedLocationError(r + 1, c + 1, sum);
    }
  }
}

ProbTensor softmax_locations(const LogitTensor& z) {
  for (double v : z.values().data())
    if (!std::isfinite(v)) throw NonFiniteInputError("logit tensor contains a non-finite entry");

  const int channels = z.num_classes() + 1;
  ProbTensor p(z.num_classes(), z.rows(), z.cols());
  for (int r = 0; r < z.rows(); ++r) {
    for (int c = 0; c < z.cols(); ++c) {
      double zmax = z.at(0, r, c);
      for (int ch = 1; ch < channels; ++ch) zmax = std::max(zmax, z.at(ch, r, c));
      double denom = 0.0;
      for (int ch = 0; ch < channels; ++ch) {
        const double e = std::exp(z.at(ch, r, c) - zmax);
        p.at(ch, r, c) = e;
        denom += e;
      }
      for (int ch = 0; ch < channels; ++ch) p.at(ch, r, c) /= denom;
    }
  }
  return p;
}

}  // namespace mil
