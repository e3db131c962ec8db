#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mil/errors.hpp"

namespace mil {

// Dense (channels, rows, cols) array of doubles, channel-major then
// row-major: index = (c * rows + r) * cols + col. The likelihood kernels
// iterate locations innermost, so one location's channels are strided and
// one channel's grid is contiguous.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int channels, int rows, int cols, double fill = 0.0)
      : channels_(channels),
        rows_(rows),
        cols_(cols),
        data_(static_cast<std::size_t>(channels) * rows * cols, fill) {}

  static Tensor3 from_data(int channels, int rows, int cols, std::vector<double> data) {
    if (data.size() != static_cast<std::size_t>(channels) * rows * cols)
      throw ShapeMismatchError("data length does not match (channels, rows, cols)");
    Tensor3 t;
    t.channels_ = channels;
    t.rows_ = rows;
    t.cols_ = cols;
    t.data_ = std::move(data);
    return t;
  }

  int channels() const { return channels_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double at(int c, int r, int col) const { return data_[index(c, r, col)]; }
  double& at(int c, int r, int col) { return data_[index(c, r, col)]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool same_shape(const Tensor3& o) const {
    return channels_ == o.channels_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t index(int c, int r, int col) const {
    return (static_cast<std::size_t>(c) * rows_ + r) * cols_ + col;
  }

  int channels_ = 0, rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Per-location categorical distribution over C+1 emission labels with shape
// (C+1, M, N). Channel c (0-based) holds class label c+1; the last channel
// holds the background label phi = C+1. Construction does not validate;
// validate_prob_tensor is the explicit check.
class ProbTensor {
 public:
  ProbTensor() = default;
  ProbTensor(int num_classes, int rows, int cols)
      : values_(num_classes + 1, rows, cols) {}

  static ProbTensor from_values(int num_classes, int rows, int cols, std::vector<double> data) {
    ProbTensor p;
    p.values_ = Tensor3::from_data(num_classes + 1, rows, cols, std::move(data));
    return p;
  }

  int num_classes() const { return values_.channels() - 1; }
  int rows() const { return values_.rows(); }
  int cols() const { return values_.cols(); }
  int phi_channel() const { return num_classes(); }

  double at(int channel, int r, int c) const { return values_.at(channel, r, c); }
  double& at(int channel, int r, int c) { return values_.at(channel, r, c); }

  const Tensor3& values() const { return values_; }
  Tensor3& values() { return values_; }

 private:
  Tensor3 values_;
};

// Pre-softmax scores z with the same shape convention as ProbTensor.
// Entries are unconstrained reals; softmax_locations turns them into a
// validated ProbTensor.
class LogitTensor {
 public:
  LogitTensor() = default;
  LogitTensor(int num_classes, int rows, int cols)
      : values_(num_classes + 1, rows, cols) {}

  static LogitTensor from_values(int num_classes, int rows, int cols, std::vector<double> data) {
    LogitTensor z;
    z.values_ = Tensor3::from_data(num_classes + 1, rows, cols, std::move(data));
    return z;
  }

  int num_classes() const { return values_.channels() - 1; }
  int rows() const { return values_.rows(); }
  int cols() const { return values_.cols(); }

  double at(int channel, int r, int c) const { return values_.at(channel, r, c); }
  double& at(int channel, int r, int c) { return values_.at(channel, r, c); }

  const Tensor3& values() const { return values_; }
  Tensor3& values() { return values_; }

 private:
  Tensor3 values_;
};

// d log Prb / d z or d log Prb / d p, shaped like the tensor it refers to.
using GradTensor = Tensor3;

inline constexpr double kNormalizationTolerance = 1e-6;

// Checks nonnegativity and per-location normalization. Pure; throws
// NegativeEntryError or UnnormalizedLocationError with 1-based indices.
void validate_prob_tensor(const ProbTensor& p);

// Per-location softmax with max subtraction. Output passes
// validate_prob_tensor; throws NonFiniteInputError on non-finite logits.
ProbTensor softmax_locations(const LogitTensor& z);

}  // namespace mil
