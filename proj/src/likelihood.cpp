#include "mil/likelihood.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>

#include "mil/errors.hpp"

namespace mil {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_labels_in_range(const LabelSet& set, const ProbTensor& p) {
  if (!set.empty() && set.max_label() > p.num_classes())
    throw LabelOutOfRangeError(set.max_label(), p.num_classes());
}

void check_subset_order(int order, int max_order) {
  // Masks are 32-bit; the representation cap applies even with a looser guard.
  int cap = max_order < 30 ? max_order : 30;
  if (order > cap) throw SubsetOrderExceededError(order, cap);
}

// log prod_{m,n} sum_{ch in channels} p(ch,m,n); channels are 0-based and
// distinct. Returns -inf as soon as one location has zero mass.
double log_alpha_channels(std::span<const int> channels, const ProbTensor& p) {
  double acc = 0.0;
  for (int r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < p.cols(); ++c) {
      double s = 0.0;
      for (int ch : channels) s += p.at(ch, r, c);
      if (s <= 0.0) return kNegInf;
      acc += std::log(s);
    }
  }
  return acc;
}

// Channel list (0-based) for the subset of set selected by label_mask, with
// the phi channel appended when requested.
void fill_channels(const LabelSet& set, std::uint32_t label_mask, bool with_phi,
                   const ProbTensor& p, std::vector<int>& channels) {
  channels.clear();
  const auto& labels = set.labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (label_mask >> i & 1u) channels.push_back(labels[i] - 1);
  if (with_phi) channels.push_back(p.phi_channel());
}

int parity_sign(int excluded_count) { return excluded_count % 2 == 0 ? 1 : -1; }

}  // namespace

AugmentedSubset AugmentedSubset::from_mask(const LabelSet& base, std::uint32_t label_mask,
                                           bool with_phi) {
  AugmentedSubset s;
  s.with_phi = with_phi;
  const auto& labels = base.labels();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (label_mask >> i & 1u) s.labels.push_back(labels[i]);
  return s;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::exact_series: return "exact";
    case Method::beta_recursion: return "beta";
    case Method::truncated: return "bound";
    case Method::brute_force: return "brute";
  }
  return "unknown";
}

double log_alpha(const AugmentedSubset& subset, const ProbTensor& p) {
  if (subset.size() == 0) throw EmptySubsetError();
  validate_prob_tensor(p);
  std::vector<int> channels;
  channels.reserve(subset.size());
  for (int label : subset.labels) {
    if (label < 1 || label > p.num_classes())
      throw LabelOutOfRangeError(label, p.num_classes());
    channels.push_back(label - 1);
  }
  if (subset.with_phi) channels.push_back(p.phi_channel());
  return log_alpha_channels(channels, p);
}

LikelihoodResult likelihood_exact(const LabelSet& set, const ProbTensor& p,
                                  int max_subset_order) {
  check_labels_in_range(set, p);
  check_subset_order(set.size(), max_subset_order);
  validate_prob_tensor(p);

  const int n = set.size();
  const std::uint32_t count = 1u << n;
  SignedLogValue acc = SignedLogValue::zero();
  std::vector<int> channels;
  channels.reserve(n + 1);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    fill_channels(set, mask, /*with_phi=*/true, p, channels);
    double la = log_alpha_channels(channels, p);
    int sign = parity_sign(n - std::popcount(mask));
    acc = sl_add(acc, SignedLogValue::from_log_signed(sign, la));
  }

  LikelihoodResult result;
  result.method = Method::exact_series;
  result.terms_evaluated = std::uint64_t{1} << n;
  // More labels than locations cannot all be emitted; the series then sums
  // to zero analytically and anything left is cancellation noise.
  if (n > p.rows() * p.cols())
    result.logprob = kNegInf;
  else
    result.logprob = acc.log_or_neg_inf();
  return result;
}

bool BetaTable::computed(std::uint32_t label_mask, bool with_phi) const {
  int order = std::popcount(label_mask) + (with_phi ? 1 : 0);
  return order >= 1 && order <= max_order_;
}

double BetaTable::log_beta(std::uint32_t label_mask, bool with_phi) const {
  if (!computed(label_mask, with_phi)) throw EmptySubsetError();
  std::uint32_t index = label_mask | (with_phi ? 1u << base_.size() : 0u);
  return logbeta_[index];
}

double BetaTable::log_beta(const AugmentedSubset& subset) const {
  std::uint32_t mask = 0;
  const auto& base_labels = base_.labels();
  for (int label : subset.labels) {
    std::size_t i = 0;
    while (i < base_labels.size() && base_labels[i] != label) ++i;
    if (i == base_labels.size()) throw LabelOutOfRangeError(label, base_.empty() ? 0 : base_.max_label());
    mask |= 1u << i;
  }
  return log_beta(mask, subset.with_phi);
}

namespace {

BetaTable beta_table_guarded(const LabelSet& set, const ProbTensor& p, int max_order,
                             int max_subset_order) {
  check_labels_in_range(set, p);
  check_subset_order(set.size(), max_subset_order);
  validate_prob_tensor(p);
  const int n = set.size();
  if (max_order < 0 || max_order > n + 1) throw SubsetOrderExceededError(max_order, n + 1);

  const std::uint32_t phi_bit = 1u << n;
  std::vector<double> logbeta(std::size_t{2} << n,
                              std::numeric_limits<double>::quiet_NaN());
  std::vector<int> channels;
  channels.reserve(n + 1);
  // Increasing-mask order: every proper submask is already final when its
  // superset subtracts it. Submasks are subtracted in decreasing numeric
  // order, the one deterministic order documented for this recursion.
  for (std::uint32_t mask = 1; mask < (phi_bit << 1); ++mask) {
    if (std::popcount(mask) > max_order) continue;
    fill_channels(set, mask & (phi_bit - 1), (mask & phi_bit) != 0, p, channels);
    SignedLogValue acc = sl_from_log(log_alpha_channels(channels, p));
    for (std::uint32_t t = (mask - 1) & mask; t != 0; t = (t - 1) & mask)
      acc = sl_add(acc, SignedLogValue::from_log(logbeta[t]).negated());
    logbeta[mask] = acc.log_or_neg_inf();  // beta is a probability: clamp at 0
  }
  return BetaTable(set, max_order, std::move(logbeta));
}

}  // namespace

BetaTable beta_table(const LabelSet& set, const ProbTensor& p, int max_order) {
  return beta_table_guarded(set, p, max_order, kDefaultMaxSubsetOrder);
}

namespace {

// Shared series behind likelihood_beta and likelihood_upper_bound:
// alpha_{L ∪ phi} minus every computed beta_T whose label part has order
// <= k and misses at least one label of L.
LikelihoodResult beta_series(const LabelSet& set, const ProbTensor& p, int k,
                             Method method, int max_subset_order) {
  check_subset_order(set.size(), max_subset_order);
  const int n = set.size();
  const int table_order = std::min(k + 1, n + 1);
  BetaTable table = beta_table_guarded(set, p, table_order, max_subset_order);

  std::vector<int> channels;
  const std::uint32_t label_full = (n == 0) ? 0u : (1u << n) - 1u;
  fill_channels(set, label_full, /*with_phi=*/true, p, channels);
  SignedLogValue acc = sl_from_log(log_alpha_channels(channels, p));
  std::uint64_t terms = 1;

  const std::uint32_t phi_bit = 1u << n;
  for (std::uint32_t mask = 1; mask < (phi_bit << 1); ++mask) {
    std::uint32_t label_part = mask & (phi_bit - 1);
    if (label_part == label_full) continue;  // T covers L: not subtracted
    if (std::popcount(label_part) > k) continue;
    acc = sl_add(acc, SignedLogValue::from_log(table.log_beta(
                          label_part, (mask & phi_bit) != 0))
                          .negated());
    ++terms;
  }

  LikelihoodResult result;
  result.method = method;
  result.terms_evaluated = terms;
  result.truncation_order = method == Method::truncated ? k : -1;
  if (n > p.rows() * p.cols() && k >= n - 1)
    result.logprob = kNegInf;  // complete series of an impossible label set
  else
    result.logprob = acc.log_or_neg_inf();
  return result;
}

}  // namespace

LikelihoodResult likelihood_beta(const LabelSet& set, const ProbTensor& p,
                                 int max_subset_order) {
  int k = set.empty() ? 0 : int(set.size()) - 1;
  return beta_series(set, p, k, Method::beta_recursion, max_subset_order);
}

LikelihoodResult likelihood_upper_bound(const LabelSet& set, const ProbTensor& p,
                                        int truncation_order, int max_subset_order) {
  if (truncation_order < 0 || truncation_order > int(set.size()))
    throw Error("truncation order " + std::to_string(truncation_order) +
                " outside [0, " + std::to_string(set.size()) + "]");
  return beta_series(set, p, truncation_order, Method::truncated, max_subset_order);
}

namespace {

struct BruteForceSweep {
  const ProbTensor& p;
  // position of each channel in the target label set, -1 if outside, or the
  // phi channel which never affects coverage
  std::vector<int> position;
  std::uint32_t full_coverage = 0;
  double total = 0.0;

  void run(int loc, double product, std::uint32_t coverage, bool outside) {
    if (loc == p.rows() * p.cols()) {
      if (!outside && coverage == full_coverage) total += product;
      return;
    }
    int r = loc / p.cols();
    int c = loc % p.cols();
    for (int ch = 0; ch <= p.num_classes(); ++ch) {
      double q = product * p.at(ch, r, c);
      if (ch == p.phi_channel())
        run(loc + 1, q, coverage, outside);
      else if (position[ch] >= 0)
        run(loc + 1, q, coverage | (1u << position[ch]), outside);
      else
        run(loc + 1, q, coverage, true);
    }
  }
};

std::uint64_t checked_combination_count(const ProbTensor& p) {
  double combos = std::pow(double(p.num_classes() + 1), double(p.rows() * p.cols()));
  if (!(combos <= kBruteForceGuard)) throw EnumerationTooLargeError(combos);
  return std::uint64_t(combos + 0.5);
}

}  // namespace

LikelihoodResult brute_force_likelihood(const LabelSet& set, const ProbTensor& p) {
  check_labels_in_range(set, p);
  validate_prob_tensor(p);
  std::uint64_t combos = checked_combination_count(p);

  BruteForceSweep sweep{p, std::vector<int>(p.num_classes(), -1), 0, 0.0};
  const auto& labels = set.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sweep.position[labels[i] - 1] = int(i);
    sweep.full_coverage |= 1u << i;
  }
  sweep.run(0, 1.0, 0, false);

  LikelihoodResult result;
  result.method = Method::brute_force;
  result.terms_evaluated = combos;
  result.logprob = sweep.total > 0.0 ? std::log(sweep.total) : kNegInf;
  return result;
}

namespace {

void all_sets_sweep(const ProbTensor& p, int loc, double product, std::uint32_t emitted,
                    std::vector<double>& out) {
  if (loc == p.rows() * p.cols()) {
    out[emitted] += product;
    return;
  }
  int r = loc / p.cols();
  int c = loc % p.cols();
  for (int ch = 0; ch <= p.num_classes(); ++ch) {
    std::uint32_t mask = ch == p.phi_channel() ? 0u : 1u << ch;
    all_sets_sweep(p, loc + 1, product * p.at(ch, r, c), emitted | mask, out);
  }
}

}  // namespace

std::vector<double> brute_force_all_label_sets(const ProbTensor& p) {
  validate_prob_tensor(p);
  if (p.num_classes() > 20) throw SubsetOrderExceededError(p.num_classes(), 20);
  checked_combination_count(p);
  std::vector<double> out(std::size_t{1} << p.num_classes(), 0.0);
  all_sets_sweep(p, 0, 1.0, 0, out);
  return out;
}

double sum_over_all_label_sets(const ProbTensor& p, int max_subset_order) {
  if (p.num_classes() > 16) throw SubsetOrderExceededError(p.num_classes(), 16);
  validate_prob_tensor(p);
  SignedLogValue acc = SignedLogValue::zero();
  for (std::uint32_t mask = 0; mask < (1u << p.num_classes()); ++mask) {
    std::vector<int> labels;
    for (int ell = 1; ell <= p.num_classes(); ++ell)
      if (mask >> (ell - 1) & 1u) labels.push_back(ell);
    LikelihoodResult r = likelihood_exact(LabelSet(labels), p, max_subset_order);
    acc = sl_add(acc, SignedLogValue::from_log(r.logprob));
  }
  return acc.log_or_neg_inf();
}

}  // namespace mil
