#pragma once

#include <string>

#include <json.hpp>

#include "mil/label_set.hpp"
#include "mil/tensor.hpp"

namespace mil {

// Tensor document: {"kind": "prob"|"logit", "shape": [C+1, M, N],
// "data": [...]} with data flattened channel-major, then row-major within a
// channel. Label set document: {"labels": [...]} with 1-based classes.
// Malformed documents raise mil::Error with the offending field named.

nlohmann::json prob_tensor_to_json(const ProbTensor& p);
ProbTensor prob_tensor_from_json(const nlohmann::json& doc);

nlohmann::json logit_tensor_to_json(const LogitTensor& z);
LogitTensor logit_tensor_from_json(const nlohmann::json& doc);

nlohmann::json label_set_to_json(const LabelSet& set);
LabelSet label_set_from_json(const nlohmann::json& doc);

// Parses the file as JSON; "-" reads stdin. Raises mil::Error naming the
// path on open or parse failure.
nlohmann::json read_json_file(const std::string& path);

// Writes doc with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace mil
