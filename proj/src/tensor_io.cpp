#include "mil/tensor_io.hpp"

#include <fstream>
#include <iostream>
#include <vector>

#include "mil/errors.hpp"

namespace mil {

namespace {

using nlohmann::json;

json tensor_doc(const char* kind, const Tensor3& t) {
  return json{{"kind", kind},
              {"shape", {t.channels(), t.rows(), t.cols()}},
              {"data", std::vector<double>(t.data().begin(), t.data().end())}};
}

Tensor3 tensor_from_doc(const json& doc, const char* expected_kind) {
  if (!doc.is_object()) throw Error("tensor document must be a JSON object");
  for (const char* key : {"kind", "shape", "data"})
    if (!doc.contains(key)) throw Error(std::string("tensor document missing \"") + key + "\"");
  if (doc["kind"] != expected_kind)
    throw Error("tensor document has kind \"" + doc["kind"].get<std::string>() +
                "\", expected \"" + expected_kind + "\"");
  const json& shape = doc["shape"];
  if (!shape.is_array() || shape.size() != 3)
    throw Error("tensor \"shape\" must be [channels, rows, cols]");
  int channels = shape[0].get<int>();
  int rows = shape[1].get<int>();
  int cols = shape[2].get<int>();
  if (channels < 2 || rows < 1 || cols < 1)
    throw Error("tensor shape [" + std::to_string(channels) + "," + std::to_string(rows) + "," +
                std::to_string(cols) + "] is not a (C+1, M, N) tensor with C >= 1");
  std::vector<double> data;
  try {
    data = doc["data"].get<std::vector<double>>();
  } catch (const json::exception&) {
    throw Error("tensor \"data\" must be an array of numbers");
  }
  return Tensor3::from_data(channels, rows, cols, std::move(data));
}

}  // namespace

nlohmann::json prob_tensor_to_json(const ProbTensor& p) {
  return tensor_doc("prob", p.values());
}

ProbTensor prob_tensor_from_json(const nlohmann::json& doc) {
  Tensor3 t = tensor_from_doc(doc, "prob");
  ProbTensor p;
  p.values() = std::move(t);
  return p;
}

nlohmann::json logit_tensor_to_json(const LogitTensor& z) {
  return tensor_doc("logit", z.values());
}

LogitTensor logit_tensor_from_json(const nlohmann::json& doc) {
  Tensor3 t = tensor_from_doc(doc, "logit");
  LogitTensor z;
  z.values() = std::move(t);
  return z;
}

nlohmann::json label_set_to_json(const LabelSet& set) {
  return nlohmann::json{{"labels", set.labels()}};
}

LabelSet label_set_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("labels"))
    throw Error("label set document must be an object with a \"labels\" array");
  std::vector<int> labels;
  try {
    labels = doc["labels"].get<std::vector<int>>();
  } catch (const nlohmann::json::exception&) {
    throw Error("\"labels\" must be an array of integers");
  }
  return LabelSet(std::move(labels));
}

nlohmann::json read_json_file(const std::string& path) {
  try {
    if (path == "-") return nlohmann::json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
}

}  // namespace mil
