#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mil/tensor.hpp"

namespace mil {

// Per-location hard label read-out; cells hold 1-based labels in
// {1..C+1} with phi = C+1, row-major.
struct EmissionMap {
  int num_classes = 0;
  int rows = 0;
  int cols = 0;
  std::vector<int> cells;

  int phi_label() const { return num_classes + 1; }
  int at(int r, int c) const { return cells[std::size_t(r) * cols + c]; }
  bool operator==(const EmissionMap&) const = default;
};

// Label sequence with no phi. Runs of one label collapse to a single entry,
// but a phi between two equal labels keeps them distinct, so consecutive
// equal entries can occur.
using Transcription = std::vector<int>;

// cell = argmax over channels, ties to the smallest label (phi loses ties).
EmissionMap emission_map(const ProbTensor& p);

// argmax over classes of sum_{m,n} log(p_label + p_phi): the exact
// single-instance rule, since the bag probability of {label} is monotone in
// this sum. Ties to the smallest label.
int classify_alpha(const ProbTensor& p);

// argmax over classes of the mean of p_label over locations. Ties to the
// smallest label.
int classify_meanpool(const ProbTensor& p);

// Per column, the most frequent non-phi label (ties to the smallest), or
// phi for a column of pure background. Length = map cols.
std::vector<int> column_sequence(const EmissionMap& map);

// phi ends any run; each maximal run of one repeated label emits the label
// once, in scan order.
Transcription collapse_transcribe(std::span<const int> seq, int phi_label);

// Labels concatenated without separators when all are single digits
// (e.g. "152"), otherwise joined by spaces.
std::string transcription_string(const Transcription& t);

// {"shape": [M, N], "cells": [row-major labels]}. Reading needs the class
// count, which the document deliberately omits, to recover phi.
nlohmann::json emission_map_to_json(const EmissionMap& map);
EmissionMap emission_map_from_json(const nlohmann::json& doc, int num_classes);

}  // namespace mil
