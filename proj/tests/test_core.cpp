#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "mil/label_set.hpp"
#include "mil/rng.hpp"
#include "mil/signed_log.hpp"
#include "mil/tensor.hpp"
#include "mil/tensor_io.hpp"

using namespace mil;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("signed-log construction") {
  SignedLogValue a = sl_from_log(std::log(0.25));
  CHECK(a.sign == +1);
  CHECK(a.logmag == doctest::Approx(std::log(0.25)));

  CHECK(sl_from_log(-kInf).sign == 0);

  SignedLogValue one = sl_from_log(0.0);
  CHECK(one.sign == +1);
  CHECK(one.value() == doctest::Approx(1.0));

  CHECK(SignedLogValue::from_linear(0.0).sign == 0);
  CHECK(SignedLogValue::from_linear(-3.0).sign == -1);
  CHECK(SignedLogValue::from_linear(-3.0).value() == doctest::Approx(-3.0));
}

TEST_CASE("signed-log addition") {
  SignedLogValue two = sl_add(sl_from_log(0.0), sl_from_log(0.0));
  CHECK(two.sign == +1);
  CHECK(two.logmag == doctest::Approx(std::log(2.0)));

  SignedLogValue half =
      sl_add(sl_from_log(std::log(0.7)), sl_from_log(std::log(0.2)).negated());
  CHECK(half.sign == +1);
  CHECK(half.value() == doctest::Approx(0.5).epsilon(1e-14));

  SignedLogValue zero =
      sl_add(sl_from_log(std::log(0.3)), sl_from_log(std::log(0.3)).negated());
  CHECK(zero.sign == 0);

  // zero is the identity on both sides
  SignedLogValue x = SignedLogValue::from_linear(0.8);
  CHECK(sl_add(SignedLogValue::zero(), x).value() == x.value());
  CHECK(sl_add(x, SignedLogValue::zero()).value() == x.value());
}

TEST_CASE("signed-log sums that underflow in the linear domain") {
  std::vector<SignedLogValue> terms(4, sl_from_log(-800.0));
  SignedLogValue total = sl_sum(terms);
  CHECK(total.sign == +1);
  CHECK(total.logmag == doctest::Approx(-800.0 + std::log(4.0)));
  CHECK(std::exp(-800.0) == 0.0);  // the linear route really does underflow

  CHECK(sl_sum({}).sign == 0);

  std::vector<SignedLogValue> mixed{sl_from_log(0.0), sl_from_log(0.0).negated(),
                                    sl_from_log(std::log(3.0))};
  SignedLogValue three = sl_sum(mixed);
  CHECK(three.sign == +1);
  CHECK(three.logmag == doctest::Approx(std::log(3.0)));
}

TEST_CASE("signed-log addition matches linear arithmetic and commutes") {
  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    SignedLogValue a{rng.below(2) ? +1 : -1, rng.uniform(-50.0, 50.0)};
    SignedLogValue b{rng.below(2) ? +1 : -1, rng.uniform(-50.0, 50.0)};
    SignedLogValue s = sl_add(a, b);
    SignedLogValue t = sl_add(b, a);
    CHECK(s.sign == t.sign);
    CHECK(s.logmag == t.logmag);  // bit-identical anchor choice
    double ref = a.value() + b.value();
    double scale = std::max({std::fabs(a.value()), std::fabs(b.value()), 1.0});
    worst = std::max(worst, std::fabs(s.value() - ref) / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("signed-log extreme magnitudes stay finite") {
  SignedLogValue big = sl_add(sl_from_log(700.0), sl_from_log(700.0));
  CHECK(big.logmag == doctest::Approx(700.0 + std::log(2.0)));
  SignedLogValue tiny = sl_add(sl_from_log(-1e8), sl_from_log(-1e8));
  CHECK(tiny.sign == +1);
  CHECK(tiny.logmag == doctest::Approx(-1e8 + std::log(2.0)));
}

TEST_CASE("label sets sort, deduplicate, and convert to bit vectors") {
  LabelSet set{4, 1, 2, 2};
  CHECK(set.labels() == std::vector<int>{1, 2, 4});
  CHECK(set.size() == 3);
  CHECK(set.contains(2));
  CHECK_FALSE(set.contains(3));

  CHECK(to_binary_vector(set, 10) == std::vector<int>{1, 1, 0, 1, 0, 0, 0, 0, 0, 0});
  CHECK(to_binary_vector(LabelSet{}, 3) == std::vector<int>{0, 0, 0});
  CHECK(to_binary_vector(LabelSet{3}, 3) == std::vector<int>{0, 0, 1});
  CHECK_THROWS_AS(to_binary_vector(LabelSet{4}, 3), LabelOutOfRangeError);
  CHECK_THROWS_AS(LabelSet{0}, LabelOutOfRangeError);

  CHECK(LabelSet::from_binary_vector({1, 1, 0, 1}) == LabelSet({1, 2, 4}));
}

TEST_CASE("probability tensor validation") {
  ProbTensor uniform = ProbTensor::from_values(2, 1, 1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK_NOTHROW(validate_prob_tensor(uniform));

  ProbTensor low = ProbTensor::from_values(1, 1, 1, {0.5, 0.4});
  CHECK_THROWS_AS(validate_prob_tensor(low), UnnormalizedLocationError);
  try {
    validate_prob_tensor(low);
  } catch (const UnnormalizedLocationError& e) {
    CHECK(e.row == 1);
    CHECK(e.col == 1);
    CHECK(e.sum == doctest::Approx(0.9));
  }

  ProbTensor neg = ProbTensor::from_values(1, 1, 1, {-0.1, 1.1});
  CHECK_THROWS_AS(validate_prob_tensor(neg), NegativeEntryError);
  try {
    validate_prob_tensor(neg);
  } catch (const NegativeEntryError& e) {
    CHECK(e.channel == 1);
    CHECK(e.row == 1);
    CHECK(e.col == 1);
  }
}

TEST_CASE("per-location softmax") {
  LogitTensor z(10, 2, 2);  // all zeros
  ProbTensor p = softmax_locations(z);
  CHECK_NOTHROW(validate_prob_tensor(p));
  for (double v : p.values().data()) CHECK(v == doctest::Approx(1.0 / 11));

  // shift invariance at one location, up to the rounding of z + 17.5
  LogitTensor a(2, 1, 2);
  a.at(0, 0, 0) = 0.3;
  a.at(1, 0, 0) = -1.2;
  a.at(2, 0, 0) = 0.9;
  LogitTensor b = a;
  for (int c = 0; c < 3; ++c) b.at(c, 0, 0) += 17.5;
  ProbTensor pa = softmax_locations(a);
  ProbTensor pb = softmax_locations(b);
  for (int c = 0; c < 3; ++c)
    CHECK(pa.at(c, 0, 0) == doctest::Approx(pb.at(c, 0, 0)).epsilon(1e-13));

  LogitTensor sat(1, 1, 1);
  sat.at(0, 0, 0) = 50.0;
  CHECK(softmax_locations(sat).at(0, 0, 0) >= 1.0 - 1e-20);

  LogitTensor bad(1, 1, 1);
  bad.at(0, 0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(softmax_locations(bad), NonFiniteInputError);
}

TEST_CASE("splittable rng streams") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 32; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng root(7);
  Rng s1 = root.split(1);
  Rng s2 = root.split(2);
  Rng s1_again = root.split(1);  // split does not advance the parent
  CHECK(s1.next_u64() == s1_again.next_u64());
  CHECK(s1.next_u64() != s2.next_u64());

  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.below(17) < 17);
  }
}

TEST_CASE("tensor and label-set JSON round trips") {
  ProbTensor p = ProbTensor::from_values(2, 1, 1, {0.5, 0.3, 0.2});
  nlohmann::json doc = prob_tensor_to_json(p);
  CHECK(doc["kind"] == "prob");
  CHECK(doc["shape"] == nlohmann::json({3, 1, 1}));
  ProbTensor back = prob_tensor_from_json(doc);
  CHECK(back.values() == p.values());

  LogitTensor z = LogitTensor::from_values(1, 2, 1, {0.5, -1.0, 2.0, 0.0});
  CHECK(logit_tensor_from_json(logit_tensor_to_json(z)).values() == z.values());

  LabelSet set{2, 5};
  CHECK(label_set_from_json(label_set_to_json(set)) == set);

  CHECK_THROWS_AS(prob_tensor_from_json(nlohmann::json{{"kind", "prob"}}), Error);
  CHECK_THROWS_AS(prob_tensor_from_json(logit_tensor_to_json(z)), Error);  // kind mismatch
  nlohmann::json shape_lie{{"kind", "prob"}, {"shape", {3, 1, 1}}, {"data", {0.5, 0.5}}};
  CHECK_THROWS_AS(prob_tensor_from_json(shape_lie), Error);
  CHECK_THROWS_AS(read_json_file("/nonexistent/path.json"), Error);
}
