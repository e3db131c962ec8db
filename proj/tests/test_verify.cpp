#include <string>

#include <doctest.h>

#include "mil/errors.hpp"
#include "mil/verify.hpp"

using namespace mil;

TEST_CASE("property suites pass at reduced sizes") {
  SuiteReport oracle = run_oracle_suite(101, 20);
  CHECK(oracle.passed());
  CHECK(oracle.trials == 20);
  CHECK(oracle.checks > 0);
  CHECK(oracle.worst_error <= 1e-9);

  SuiteReport partition = run_partition_suite(102, 10);
  CHECK(partition.passed());
  CHECK(partition.worst_error <= 1e-9);

  SuiteReport gradcheck = run_gradcheck_suite(103, 10);
  CHECK(gradcheck.passed());
  CHECK(gradcheck.worst_error <= 1e-5);

  SuiteReport bounds = run_bounds_suite(104, 20);
  CHECK(bounds.passed());
}

TEST_CASE("suite reports are byte-reproducible and policy-independent") {
  SuiteReport a = run_suite("gradcheck", 7, 12, Exec::serial);
  SuiteReport b = run_suite("gradcheck", 7, 12, Exec::serial);
  SuiteReport c = run_suite("gradcheck", 7, 12, Exec::parallel);
  CHECK(suite_report_text(a) == suite_report_text(b));
  CHECK(suite_report_text(a) == suite_report_text(c));
  CHECK(suite_report_text(a).find("result: pass") != std::string::npos);

  SuiteReport d = run_suite("gradcheck", 8, 12, Exec::serial);
  CHECK(suite_report_text(a) != suite_report_text(d));  // the seed matters
}

TEST_CASE("unknown suite names are rejected") {
  CHECK_THROWS_AS(run_suite("nonsense", 1, 1, Exec::serial), Error);
}
