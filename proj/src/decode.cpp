#include "mil/decode.hpp"

#include <cmath>

#include "mil/errors.hpp"

namespace mil {

EmissionMap emission_map(const ProbTensor& p) {
  validate_prob_tensor(p);
  EmissionMap map{p.num_classes(), p.rows(), p.cols(), {}};
  map.cells.reserve(std::size_t(p.rows()) * p.cols());
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) {
      int best = 0;
      for (int ch = 1; ch <= p.num_classes(); ++ch)
        if (p.at(ch, r, c) > p.at(best, r, c)) best = ch;
      map.cells.push_back(best + 1);
    }
  return map;
}

namespace {

// Shared argmax over classes with smallest-label tie-breaking.
int argmax_class(const ProbTensor& p, double (*score)(const ProbTensor&, int)) {
  if (p.num_classes() < 1) throw Error("classification needs at least one class");
  validate_prob_tensor(p);
  int best = 1;
  double best_score = score(p, 1);
  for (int label = 2; label <= p.num_classes(); ++label) {
    double s = score(p, label);
    if (s > best_score) {
      best = label;
      best_score = s;
    }
  }
  return best;
}

double alpha_score(const ProbTensor& p, int label) {
  double acc = 0.0;
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c)
      acc += std::log(p.at(label - 1, r, c) + p.at(p.phi_channel(), r, c));
  return acc;
}

double mean_score(const ProbTensor& p, int label) {
  double acc = 0.0;
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) acc += p.at(label - 1, r, c);
  return acc / double(p.rows() * p.cols());
}

}  // namespace

int classify_alpha(const ProbTensor& p) { return argmax_class(p, alpha_score); }

int classify_meanpool(const ProbTensor& p) { return argmax_class(p, mean_score); }

std::vector<int> column_sequence(const EmissionMap& map) {
  std::vector<int> seq(map.cols, map.phi_label());
  std::vector<int> count(map.num_classes + 1, 0);
  for (int c = 0; c < map.cols; ++c) {
    std::fill(count.begin(), count.end(), 0);
    for (int r = 0; r < map.rows; ++r) {
      int label = map.at(r, c);
      if (label != map.phi_label()) ++count[label];
    }
    int best = map.phi_label();
    int best_count = 0;
    for (int label = 1; label <= map.num_classes; ++label)
      if (count[label] > best_count) {
        best = label;
        best_count = count[label];
      }
    seq[c] = best;
  }
  return seq;
}

Transcription collapse_transcribe(std::span<const int> seq, int phi_label) {
  Transcription out;
  int prev = 0;  // 0: no open run
  for (int label : seq) {
    if (label == phi_label) {
      prev = 0;
      continue;
    }
    if (label != prev) out.push_back(label);
    prev = label;
  }
  return out;
}

std::string transcription_string(const Transcription& t) {
  bool single_digits = true;
  for (int label : t)
    if (label > 9) single_digits = false;
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !single_digits) s += ' ';
    s += std::to_string(t[i]);
  }
  return s;
}

nlohmann::json emission_map_to_json(const EmissionMap& map) {
  return nlohmann::json{{"shape", {map.rows, map.cols}}, {"cells", map.cells}};
}

EmissionMap emission_map_from_json(const nlohmann::json& doc, int num_classes) {
  if (!doc.is_object() || !doc.contains("shape") || !doc.contains("cells"))
    throw Error("emission map document must have \"shape\" and \"cells\"");
  const nlohmann::json& shape = doc["shape"];
  if (!shape.is_array() || shape.size() != 2)
    throw Error("emission map \"shape\" must be [rows, cols]");
  EmissionMap map{num_classes, shape[0].get<int>(), shape[1].get<int>(), {}};
  if (map.rows < 1 || map.cols < 1 || num_classes < 1)
    throw Error("emission map needs positive shape and class count");
  try {
    map.cells = doc["cells"].get<std::vector<int>>();
  } catch (const nlohmann::json::exception&) {
    throw Error("emission map \"cells\" must be an array of integers");
  }
  if (map.cells.size() != std::size_t(map.rows) * map.cols)
    throw ShapeMismatchError("emission map cell count does not match shape");
  for (int label : map.cells)
    if (label < 1 || label > map.phi_label())
      throw LabelOutOfRangeError(label, map.phi_label());
  return map;
}

}  // namespace mil
