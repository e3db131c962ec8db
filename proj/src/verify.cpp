#include "mil/verify.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "mil/errors.hpp"
#include "mil/gradient.hpp"
#include "mil/likelihood.hpp"
#include "mil/rng.hpp"
#include "mil/tensor.hpp"

namespace mil {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LogitTensor random_logits(Rng& rng, int num_classes, int rows, int cols, double range) {
  LogitTensor z(num_classes, rows, cols);
  for (double& v : z.values().data()) v = rng.uniform(-range, range);
  return z;
}

struct TrialOutcome {
  int checks = 0;
  int failures = 0;
  double worst_error = 0.0;
  std::string label;  // filled by the trial, reported if it holds the worst error
};

// One comparison: err against tol, tracked in the trial outcome.
void check(TrialOutcome& t, double err, double tol) {
  ++t.checks;
  if (!(err <= tol)) ++t.failures;
  if (err > t.worst_error) t.worst_error = err;
}

SuiteReport reduce(const char* suite, std::uint64_t seed, int trials, Exec exec,
                   void (*run_trial)(Rng, TrialOutcome&)) {
  std::vector<TrialOutcome> outcomes(trials);
  Rng base(seed);
  parallel_for(exec, std::size_t(trials), [&](std::size_t i) {
    run_trial(base.split(i), outcomes[i]);
  });

  SuiteReport report;
  report.suite = suite;
  report.seed = seed;
  report.trials = trials;
  for (int i = 0; i < trials; ++i) {
    const TrialOutcome& t = outcomes[i];
    report.checks += t.checks;
    report.failures += t.failures;
    if (t.worst_error > report.worst_error) {
      report.worst_error = t.worst_error;
      report.worst_case = "trial " + std::to_string(i) + " " + t.label;
    }
  }
  return report;
}

std::string describe(int C, int M, int N) {
  return "C=" + std::to_string(C) + " M=" + std::to_string(M) + " N=" + std::to_string(N);
}

// --- oracle ------------------------------------------------------------

void oracle_trial(Rng rng, TrialOutcome& t) {
  const int C = 1 + int(rng.below(4));
  const int M = 1 + int(rng.below(3));
  const int N = 1 + int(rng.below(3));
  t.label = describe(C, M, N);
  ProbTensor p = softmax_locations(random_logits(rng, C, M, N, 2.0));
  std::vector<double> oracle = brute_force_all_label_sets(p);

  for (std::uint32_t mask = 0; mask < (1u << C); ++mask) {
    std::vector<int> labels;
    for (int ell = 1; ell <= C; ++ell)
      if (mask >> (ell - 1) & 1u) labels.push_back(ell);
    LabelSet set(labels);

    double exact = std::exp(likelihood_exact(set, p).logprob);
    check(t, std::abs(exact - oracle[mask]), 1e-9);

    double beta = std::exp(likelihood_beta(set, p).logprob);
    double scale = std::max({exact, beta, 1e-300});
    check(t, std::abs(exact - beta) / scale, 1e-9);
  }
}

// --- partition of unity --------------------------------------------------

void partition_trial(Rng rng, TrialOutcome& t) {
  const int C = 1 + int(rng.below(8));
  const int M = 1 + int(rng.below(4));
  const int N = 1 + int(rng.below(4));
  t.label = describe(C, M, N);
  ProbTensor p = softmax_locations(random_logits(rng, C, M, N, 3.0));
  double total = std::exp(sum_over_all_label_sets(p));
  check(t, std::abs(total - 1.0), 1e-9);
}

// --- gradcheck -----------------------------------------------------------

void gradcheck_trial(Rng rng, TrialOutcome& t) {
  const int C = 1 + int(rng.below(4));
  const int M = 1 + int(rng.below(3));
  const int N = 1 + int(rng.below(3));
  LogitTensor z = random_logits(rng, C, M, N, 2.0);

  // Random label set no larger than the location count, so the likelihood
  // stays positive (softmax probabilities are all positive).
  std::vector<int> labels;
  for (int ell = 1; ell <= C; ++ell)
    if (int(labels.size()) < M * N && rng.below(2) == 1) labels.push_back(ell);
  if (labels.empty()) labels.push_back(1 + int(rng.below(C)));
  LabelSet set(labels);
  t.label = describe(C, M, N) + " |L|=" + std::to_string(set.size());

  GradTensor analytic = grad_wrt_logits(set, z);
  GradTensor reference = finite_difference_gradient(set, z);
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    double a = analytic.data()[i];
    double f = reference.data()[i];
    check(t, std::abs(a - f) / std::max(1.0, std::abs(f)), 1e-5);
  }
}

// --- truncated-bound ordering ---------------------------------------------

void bounds_trial(Rng rng, TrialOutcome& t) {
  const int size = 2 + int(rng.below(4));
  const int C = size + int(rng.below(4));
  const int M = 2 + int(rng.below(2));
  const int N = 2 + int(rng.below(2));
  ProbTensor p = softmax_locations(random_logits(rng, C, M, N, 2.0));

  // size distinct labels: prefix of a Fisher-Yates shuffle of 1..C
  std::vector<int> pool(C);
  for (int i = 0; i < C; ++i) pool[i] = i + 1;
  for (int i = C - 1; i > 0; --i) std::swap(pool[i], pool[rng.below(i + 1)]);
  LabelSet set(std::vector<int>(pool.begin(), pool.begin() + size));
  t.label = describe(C, M, N) + " |L|=" + std::to_string(size);

  double exact = std::exp(likelihood_exact(set, p).logprob);
  for (int k = 0; k <= size; ++k) {
    double bound = std::exp(likelihood_upper_bound(set, p, k).logprob);
    check(t, exact - bound, 1e-9);  // bound must not undershoot
    if (k >= size - 1) check(t, std::abs(bound - exact), 1e-9);
  }
}

}  // namespace

SuiteReport run_oracle_suite(std::uint64_t seed, int trials, Exec exec) {
  return reduce("oracle", seed, trials, exec, oracle_trial);
}

SuiteReport run_partition_suite(std::uint64_t seed, int trials, Exec exec) {
  return reduce("partition", seed, trials, exec, partition_trial);
}

SuiteReport run_gradcheck_suite(std::uint64_t seed, int trials, Exec exec) {
  return reduce("gradcheck", seed, trials, exec, gradcheck_trial);
}

SuiteReport run_bounds_suite(std::uint64_t seed, int trials, Exec exec) {
  return reduce("bounds", seed, trials, exec, bounds_trial);
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, int trials, Exec exec) {
  if (name == "oracle") return run_oracle_suite(seed, trials, exec);
  if (name == "partition") return run_partition_suite(seed, trials, exec);
  if (name == "gradcheck") return run_gradcheck_suite(seed, trials, exec);
  if (name == "bounds") return run_bounds_suite(seed, trials, exec);
  throw Error("unknown suite \"" + name + "\" (oracle|partition|gradcheck|bounds)");
}

std::string suite_report_text(const SuiteReport& r) {
  std::string s;
  s += "suite: " + r.suite + "\n";
  s += "seed: " + std::to_string(r.seed) + "\n";
  s += "trials: " + std::to_string(r.trials) + "\n";
  s += "checks: " + std::to_string(r.checks) + "\n";
  s += "failures: " + std::to_string(r.failures) + "\n";
  s += "worst_error: " + fmt_double(r.worst_error) + "\n";
  s += "worst_case: " + r.worst_case + "\n";
  s += std::string("result: ") + (r.passed() ? "pass" : "fail") + "\n";
  return s;
}

}  // namespace mil
