#pragma once

#include <stdexcept>
#include <string>

namespace mil {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- tensor validation ------------------------------------------------------

// A probability entry is negative. Indices are reported 1-based, matching the
// (channel, row, col) convention of the JSON tensor format.
class NegativeEntryError : public Error {
 public:
  NegativeEntryError(int channel, int row, int col, double value)
      : Error("negative entry p[" + std::to_string(channel) + "," + std::to_string(row) + "," +
              std::to_string(col) + "] = " + std::to_string(value)),
        channel(channel),
        row(row),
        col(col),
        value(value) {}
  int channel, row, col;
  double value;
};

// Per-location channel sum differs from 1 by more than the tolerance.
class UnnormalizedLocationError : public Error {
 public:
  UnnormalizedLocationError(int row, int col, double sum)
      : Error("location (" + std::to_string(row) + "," + std::to_string(col) +
              ") sums to " + std::to_string(sum) + ", expected 1"),
        row(row),
        col(col),
        sum(sum) {}
  int row, col;
  double sum;
};

class NonFiniteInputError : public Error {
 public:
  explicit NonFiniteInputError(const std::string& what) : Error(what) {}
};

class LabelOutOfRangeError : public Error {
 public:
  LabelOutOfRangeError(int label, int num_classes)
      : Error("label " + std::to_string(label) + " outside [1, " + std::to_string(num_classes) + "]"),
        label(label),
        num_classes(num_classes) {}
  int label, num_classes;
};

// --- likelihood -------------------------------------------------------------

class EmptySubsetError : public Error {
 public:
  EmptySubsetError() : Error("augmented subset must be nonempty") {}
};

class SubsetOrderExceededError : public Error {
 public:
  SubsetOrderExceededError(std::size_t order, std::size_t max_order)
      : Error("label set order " + std::to_string(order) + " exceeds limit " +
              std::to_string(max_order)),
        order(order),
        max_order(max_order) {}
  std::size_t order, max_order;
};

class EnumerationTooLargeError : public Error {
 public:
  explicit EnumerationTooLargeError(double combinations)
      : Error("brute-force enumeration of ~" + std::to_string(combinations) +
              " label assignments exceeds the guard"),
        combinations(combinations) {}
  double combinations;
};

// --- gradient ---------------------------------------------------------------

// The label set has zero probability under the tensor; the log-likelihood
// gradient is undefined there.
class ZeroProbabilityError : public Error {
 public:
  ZeroProbabilityError() : Error("gradient undefined: label set has zero probability") {}
};

// --- baselines --------------------------------------------------------------

class EmptyLabelSetError : public Error {
 public:
  EmptyLabelSetError() : Error("traditional MIL cost is undefined for an empty label set") {}
};

class MaxIsZeroError : public Error {
 public:
  explicit MaxIsZeroError(int label)
      : Error("max probability for class " + std::to_string(label) + " is zero"), label(label) {}
  int label;
};

class ShapeNotSingletonError : public Error {
 public:
  ShapeNotSingletonError(int rows, int cols)
      : Error("expected a 1x1 tensor, got " + std::to_string(rows) + "x" + std::to_string(cols)) {}
};

// --- harness ----------------------------------------------------------------

class GlyphTooLargeForCanvasError : public Error {
 public:
  GlyphTooLargeForCanvasError(int glyph, int height, int width)
      : Error("glyph size " + std::to_string(glyph) + " does not fit canvas " +
              std::to_string(height) + "x" + std::to_string(width)) {}
};

class InputTooSmallError : public Error {
 public:
  InputTooSmallError(int height, int width, int minimum)
      : Error("input " + std::to_string(height) + "x" + std::to_string(width) +
              " smaller than the minimum " + std::to_string(minimum) +
              " required by the layer chain") {}
};

class ShapeMismatchError : public Error {
 public:
  explicit ShapeMismatchError(const std::string& what) : Error(what) {}
};

class ZeroProbabilitySampleError : public Error {
 public:
  explicit ZeroProbabilitySampleError(std::size_t index)
      : Error("sample " + std::to_string(index) + " has zero probability under the model"),
        index(index) {}
  std::size_t index;
};

class DivergedObjectiveError : public Error {
 public:
  DivergedObjectiveError(double nll, double initial)
      : Error("objective diverged: mean NLL " + std::to_string(nll) + " exceeds 10x initial " +
              std::to_string(initial)),
        nll(nll),
        initial(initial) {}
  double nll, initial;
};

}  // namespace mil
