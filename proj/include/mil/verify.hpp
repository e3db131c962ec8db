#pragma once

#include <cstdint>
#include <string>

#include "mil/exec.hpp"

namespace mil {

// Outcome of one property suite. Serialization contains no timing, so a
// report is byte-reproducible for a fixed seed and trial count.
struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  int checks = 0;           // individual comparisons across all trials
  int failures = 0;
  double worst_error = 0.0;
  std::string worst_case;   // description of the trial holding worst_error

  bool passed() const { return failures == 0; }
};

// One line per field, fixed order, full double precision; the determinism
// comparison surface for verification runs.
std::string suite_report_text(const SuiteReport& r);

// Exact series vs the assignment-enumeration oracle, every label subset of
// every trial tensor (C in 1..4, M,N in 1..3), absolute tolerance 1e-9 on
// probabilities. Also cross-checks the beta-recursion route against both.
SuiteReport run_oracle_suite(std::uint64_t seed, int trials = 200, Exec exec = Exec::serial);

// Sum of Prb over all 2^C label sets equals 1 within 1e-9 (C up to 8,
// M,N up to 4).
SuiteReport run_partition_suite(std::uint64_t seed, int trials = 50, Exec exec = Exec::serial);

// Analytic logit gradient vs central finite differences (step 1e-5),
// relative error capped at 1e-5 with denominator max(1, |reference|).
SuiteReport run_gradcheck_suite(std::uint64_t seed, int trials = 50, Exec exec = Exec::serial);

// Truncated-series upper bounds: every order k is >= the exact probability
// minus 1e-9, and k = |L|-1 matches it within 1e-9.
SuiteReport run_bounds_suite(std::uint64_t seed, int trials = 100, Exec exec = Exec::serial);

SuiteReport run_suite(const std::string& name, std::uint64_t seed, int trials, Exec exec);

}  // namespace mil
