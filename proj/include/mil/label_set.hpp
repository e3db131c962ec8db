#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mil/errors.hpp"

namespace mil {

// Set of distinct class labels present in a sample. Labels are 1-based and
// exclude the background label phi (which is always class C+1). Stored
// sorted ascending; duplicates collapse, per the set semantics of bag labels.
class LabelSet {
 public:
  LabelSet() = default;

  explicit LabelSet(std::vector<int> labels) : labels_(std::move(labels)) {
    for (int l : labels_)
      if (l < 1) throw LabelOutOfRangeError(l, 0);
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  }

  LabelSet(std::initializer_list<int> labels) : LabelSet(std::vector<int>(labels)) {}

  // bits[i] nonzero means class i+1 is present.
  static LabelSet from_binary_vector(const std::vector<int>& bits) {
    std::vector<int> labels;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i] != 0) labels.push_back(static_cast<int>(i) + 1);
    return LabelSet(std::move(labels));
  }

  const std::vector<int>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  bool contains(int label) const {
    return std::binary_search(labels_.begin(), labels_.end(), label);
  }

  int max_label() const { return labels_.empty() ? 0 : labels_.back(); }

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<int> labels_;
};

// Length-C binary vector with bit i-1 set iff class i is in the set.
inline std::vector<int> to_binary_vector(const LabelSet& set, int num_classes) {
  if (set.max_label() > num_classes) throw LabelOutOfRangeError(set.max_label(), num_classes);
  std::vector<int> bits(static_cast<std::size_t>(num_classes), 0);
  for (int l : set.labels()) bits[static_cast<std::size_t>(l) - 1] = 1;
  return bits;
}

}  // namespace mil
