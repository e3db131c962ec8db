#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mil/label_set.hpp"
#include "mil/signed_log.hpp"
#include "mil/tensor.hpp"

namespace mil {

// Exact methods refuse label sets larger than this; the series has 2^|L|
// terms, and the truncated upper bound is the intended fallback beyond it.
inline constexpr int kDefaultMaxSubsetOrder = 16;

// Guard on (C+1)^(M*N) for the brute-force enumeration.
inline constexpr double kBruteForceGuard = 1e7;

// Subset of L ∪ {phi}: distinct ascending class labels (1-based, phi
// excluded) plus a phi flag.
struct AugmentedSubset {
  std::vector<int> labels;
  bool with_phi = false;

  std::size_t size() const { return labels.size() + (with_phi ? 1u : 0u); }

  // Decodes a bitmask over the positions of base.labels().
  static AugmentedSubset from_mask(const LabelSet& base, std::uint32_t label_mask, bool with_phi);
};

enum class Method { exact_series, beta_recursion, truncated, brute_force };

const char* method_name(Method m);

struct LikelihoodResult {
  // log Prb(L | P); -inf is the explicit zero-probability state.
  double logprob = -std::numeric_limits<double>::infinity();
  std::uint64_t terms_evaluated = 0;
  Method method = Method::exact_series;
  int truncation_order = -1;  // k for Method::truncated, -1 otherwise

  bool is_zero() const { return logprob == -std::numeric_limits<double>::infinity(); }
};

// log alpha_S = sum_{m,n} log sum_{i in S} p_i(m,n): log probability that
// every location emits a label from S. -inf iff some location has zero mass
// on S. Throws EmptySubsetError for an empty subset.
double log_alpha(const AugmentedSubset& subset, const ProbTensor& p);

// Inclusion-exclusion series: Prb(L|P) = sum over S ⊆ L of
// (-1)^(|L|-|S|) alpha_{S ∪ {phi}}, accumulated as SignedLogValue terms in
// increasing-bitmask order. terms_evaluated = 2^|L|. A label set larger than
// the location count has probability exactly zero and reports -inf.
LikelihoodResult likelihood_exact(const LabelSet& set, const ProbTensor& p,
                                  int max_subset_order = kDefaultMaxSubsetOrder);

// Table of log beta_S: the probability that every label of S appears at
// least once and nothing outside S appears. Indexed by a bitmask over the
// positions of the generating label set, with the phi flag as the top bit.
class BetaTable {
 public:
  BetaTable(LabelSet base, int max_order, std::vector<double> logbeta)
      : base_(std::move(base)), max_order_(max_order), logbeta_(std::move(logbeta)) {}

  const LabelSet& base() const { return base_; }
  int max_order() const { return max_order_; }

  bool computed(std::uint32_t label_mask, bool with_phi) const;
  double log_beta(std::uint32_t label_mask, bool with_phi) const;
  double log_beta(const AugmentedSubset& subset) const;

 private:
  LabelSet base_;
  int max_order_;                // bound on |S| counting phi
  std::vector<double> logbeta_;  // index = label_mask | phi << |base|
};

// Bottom-up recursion beta_S = alpha_S - sum of beta over nonempty proper
// subsets, for every nonempty S ⊆ L ∪ {phi} with |S| <= max_order. Values
// are clamped at zero: a negative remainder is cancellation noise.
BetaTable beta_table(const LabelSet& set, const ProbTensor& p, int max_order);

// Prb(L|P) = alpha_{L ∪ phi} - sum of beta_T over every nonempty
// T ⊆ L ∪ {phi} that misses at least one label of L. Agrees with
// likelihood_exact; the two routes share no series code.
LikelihoodResult likelihood_beta(const LabelSet& set, const ProbTensor& p,
                                 int max_subset_order = kDefaultMaxSubsetOrder);

// Same series with subtracted beta terms restricted to label-part order
// <= truncation_order. Every beta is nonnegative, so dropping terms can only
// raise the value: the result is an upper bound, exact at k = |L| - 1.
LikelihoodResult likelihood_upper_bound(const LabelSet& set, const ProbTensor& p,
                                        int truncation_order,
                                        int max_subset_order = kDefaultMaxSubsetOrder);

// Definitional semantics: enumerate every assignment of one label from
// {1..C+1} to each location and sum the product of emission probabilities
// over assignments whose emitted non-phi label set equals L exactly.
// Independent of the alpha/beta machinery; this is the oracle.
LikelihoodResult brute_force_likelihood(const LabelSet& set, const ProbTensor& p);

// One enumeration sweep computing Prb(L|P) for every L at once; entry m of
// the result is the linear-domain probability of the label set whose class-ℓ
// bit is (m >> (ℓ-1)) & 1. Requires C <= 20 on top of the enumeration guard.
std::vector<double> brute_force_all_label_sets(const ProbTensor& p);

// log of sum over all 2^C label sets of exp(likelihood_exact). A partition
// of unity: the result is 0 up to accumulation error. Requires C <= 16.
double sum_over_all_label_sets(const ProbTensor& p,
                               int max_subset_order = kDefaultMaxSubsetOrder);

}  // namespace mil
