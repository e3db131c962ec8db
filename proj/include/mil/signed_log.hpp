#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace mil {

// Signs differing by less than this in log magnitude cancel to exact zero.
// Alternating inclusion-exclusion series produce true zeros (e.g. two labels
// at a single location) that floating-point rounding would otherwise turn
// into noise of arbitrary sign.
inline constexpr double kCancellationThreshold = 1e-14;

// A real number stored as sign * exp(logmag). sign == 0 is exact zero and
// logmag is ignored. Used for alternating sums whose terms underflow in the
// linear domain.
struct SignedLogValue {
  int sign = 0;
  double logmag = -std::numeric_limits<double>::infinity();

  static SignedLogValue zero() { return {}; }

  static SignedLogValue from_log(double logmag) {
    if (logmag == -std::numeric_limits<double>::infinity()) return zero();
    return {+1, logmag};
  }

  static SignedLogValue from_log_signed(int sign, double logmag) {
    if (sign == 0 || logmag == -std::numeric_limits<double>::infinity()) return zero();
    return {sign, logmag};
  }

  static SignedLogValue from_linear(double x) {
    if (x == 0.0) return zero();
    return {x > 0.0 ? +1 : -1, std::log(std::abs(x))};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }

  // Extended-real log of a nonnegative value: -inf for zero.
  double log_or_neg_inf() const {
    return sign <= 0 ? -std::numeric_limits<double>::infinity() : logmag;
  }

  SignedLogValue negated() const { return {-sign, logmag}; }
};

// log(x +/- y) = log x + log(1 +/- exp(log y - log x)) with x the larger
// magnitude, so exp never sees a positive argument. Symmetric in a and b to
// the last bit: the anchor is chosen by magnitude, and equal magnitudes with
// opposite signs cancel exactly.
inline SignedLogValue sl_add(SignedLogValue a, SignedLogValue b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.sign != b.sign && std::abs(a.logmag - b.logmag) < kCancellationThreshold)
    return SignedLogValue::zero();
  const SignedLogValue& hi = a.logmag >= b.logmag ? a : b;
  const SignedLogValue& lo = a.logmag >= b.logmag ? b : a;
  const double r = std::exp(lo.logmag - hi.logmag);  // in (0, 1]
  const double adj = a.sign == b.sign ? std::log1p(r) : std::log1p(-r);
  return SignedLogValue::from_log_signed(hi.sign, hi.logmag + adj);
}

inline SignedLogValue sl_from_log(double logmag) { return SignedLogValue::from_log(logmag); }

// Left fold in input order; no pairwise or tree reduction, so identical
// inputs give bit-identical results regardless of how callers are threaded.
inline SignedLogValue sl_sum(std::span<const SignedLogValue> terms) {
  SignedLogValue acc = SignedLogValue::zero();
  for (const SignedLogValue& t : terms) acc = sl_add(acc, t);
  return acc;
}

}  // namespace mil
