#include "mil/harness/io.hpp"

#include "mil/errors.hpp"

namespace mil::harness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json spec_to_json(const ConvLayerSpec& s) {
  return ordered_json{{"in_channels", s.in_channels},
                      {"out_channels", s.out_channels},
                      {"kernel", s.kernel},
                      {"stride", s.stride},
                      {"relu", s.relu},
                      {"init_gain", s.init_gain}};
}

ConvLayerSpec spec_from_json(const json& doc) {
  ConvLayerSpec s;
  s.in_channels = doc.at("in_channels").get<int>();
  s.out_channels = doc.at("out_channels").get<int>();
  s.kernel = doc.at("kernel").get<int>();
  s.stride = doc.at("stride").get<int>();
  s.relu = doc.at("relu").get<bool>();
  s.init_gain = doc.value("init_gain", 1.0);
  return s;
}

ordered_json config_to_json(const TrainConfig& c) {
  return ordered_json{{"num_classes", c.num_classes},
                      {"canvas", c.canvas},
                      {"glyph_size", c.glyph_size},
                      {"glyphs_per_scene", c.glyphs_per_scene},
                      {"train_size", c.train_size},
                      {"epochs", c.epochs},
                      {"batch_size", c.batch_size},
                      {"lr_first", c.lr_first},
                      {"lr_second", c.lr_second},
                      {"seed", c.seed},
                      {"loss", loss_name(c.loss)}};
}

TrainConfig config_from_json(const json& doc) {
  TrainConfig c;
  c.num_classes = doc.at("num_classes").get<int>();
  c.canvas = doc.at("canvas").get<int>();
  c.glyph_size = doc.at("glyph_size").get<int>();
  c.glyphs_per_scene = doc.at("glyphs_per_scene").get<int>();
  c.train_size = doc.at("train_size").get<int>();
  c.epochs = doc.at("epochs").get<int>();
  c.batch_size = doc.at("batch_size").get<int>();
  c.lr_first = doc.at("lr_first").get<double>();
  c.lr_second = doc.at("lr_second").get<double>();
  c.seed = doc.at("seed").get<std::uint64_t>();
  c.loss = loss_from_name(doc.at("loss").get<std::string>());
  return c;
}

}  // namespace

nlohmann::ordered_json checkpoint_to_json(const TrainResult& result) {
  ordered_json arch = ordered_json::array();
  for (const ConvLayerSpec& s : result.architecture) arch.push_back(spec_to_json(s));
  ordered_json layers = ordered_json::array();
  for (const ConvLayer& layer : result.params)
    layers.push_back(ordered_json{{"kernel", layer.weights}, {"bias", layer.bias}});
  return ordered_json{{"architecture", arch},
                      {"layers", layers},
                      {"seed", result.config.seed},
                      {"config", config_to_json(result.config)}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
  try {
    Checkpoint ck;
    for (const json& s : doc.at("architecture")) ck.architecture.push_back(spec_from_json(s));
    ck.config = config_from_json(doc.at("config"));
    const json& layers = doc.at("layers");
    if (layers.size() != ck.architecture.size())
      throw ShapeMismatchError("checkpoint layer count does not match architecture");
    for (std::size_t i = 0; i < ck.architecture.size(); ++i) {
      ConvLayer layer;
      layer.spec = ck.architecture[i];
      layer.weights = layers[i].at("kernel").get<std::vector<double>>();
      layer.bias = layers[i].at("bias").get<std::vector<double>>();
      std::size_t expect = std::size_t(layer.spec.out_channels) * layer.spec.in_channels *
                           layer.spec.kernel * layer.spec.kernel;
      if (layer.weights.size() != expect ||
          layer.bias.size() != std::size_t(layer.spec.out_channels))
        throw ShapeMismatchError("checkpoint layer " + std::to_string(i) +
                                 " arrays do not match its spec");
      ck.params.push_back(std::move(layer));
    }
    return ck;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

std::string metrics_jsonl(const std::vector<EpochRecord>& epochs) {
  std::string out;
  for (const EpochRecord& r : epochs) {
    ordered_json line{
        {"epoch", r.epoch}, {"mean_nll", r.mean_nll}, {"lr", r.lr}, {"wall_ms", r.wall_ms}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string metrics_canonical(const std::vector<EpochRecord>& epochs) {
  std::string out;
  for (const EpochRecord& r : epochs) {
    ordered_json line{{"epoch", r.epoch}, {"mean_nll", r.mean_nll}, {"lr", r.lr}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace mil::harness
