#include "mil/harness/model.hpp"

#include <cmath>

#include "mil/errors.hpp"

namespace mil::harness {

std::vector<ConvLayerSpec> default_architecture(int num_classes) {
  // The head's init gain of 8 lifts the whole stack out of the label-prior
  // plateau within the first epochs; with unit gain the fixed 0.01 SGD step
  // is too small to leave it inside the training budget.
  return {
      {1, 8, 5, 2, true, 1.0},
      {8, 32, 5, 2, true, 1.0},
      {32, num_classes + 1, 1, 1, false, 8.0},
  };
}

ModelParams init_params(const std::vector<ConvLayerSpec>& arch, Rng& rng) {
  ModelParams params;
  params.reserve(arch.size());
  for (const ConvLayerSpec& spec : arch) {
    ConvLayer layer;
    layer.spec = spec;
    std::size_t n =
        std::size_t(spec.out_channels) * spec.in_channels * spec.kernel * spec.kernel;
    layer.weights.resize(n);
    double std_dev = spec.init_gain *
                     std::sqrt(2.0 / (double(spec.in_channels) * spec.kernel * spec.kernel));
    for (double& w : layer.weights) w = std_dev * rng.normal();
    layer.bias.assign(spec.out_channels, 0.0);
    params.push_back(std::move(layer));
  }
  return params;
}

namespace {

Tensor3 conv_forward(const ConvLayer& layer, const Tensor3& in) {
  const ConvLayerSpec& s = layer.spec;
  if (in.channels() != s.in_channels)
    throw ShapeMismatchError("layer expects " + std::to_string(s.in_channels) +
                             " input channels, got " + std::to_string(in.channels()));
  if (in.rows() < s.kernel || in.cols() < s.kernel)
    throw InputTooSmallError(in.rows(), in.cols(), s.kernel);

  const int oh = (in.rows() - s.kernel) / s.stride + 1;
  const int ow = (in.cols() - s.kernel) / s.stride + 1;
  Tensor3 out(s.out_channels, oh, ow);
  for (int o = 0; o < s.out_channels; ++o)
    for (int i = 0; i < oh; ++i)
      for (int j = 0; j < ow; ++j) {
        double acc = layer.bias[o];
        for (int ic = 0; ic < s.in_channels; ++ic)
          for (int u = 0; u < s.kernel; ++u)
            for (int v = 0; v < s.kernel; ++v)
              acc += layer.weight(o, ic, u, v) * in.at(ic, i * s.stride + u, j * s.stride + v);
        if (s.relu && acc < 0.0) acc = 0.0;
        out.at(o, i, j) = acc;
      }
  return out;
}

// d<dout, layer(in)>/d(weights, bias, in). dout must already be masked
// through the rectifier (the caller masks where the cached output is zero).
void conv_backward(const ConvLayer& layer, const Tensor3& in, const Tensor3& dout,
                   LayerGrad& grad, Tensor3& din) {
  const ConvLayerSpec& s = layer.spec;
  din = Tensor3(in.channels(), in.rows(), in.cols());
  grad.weights.assign(layer.weights.size(), 0.0);
  grad.bias.assign(layer.bias.size(), 0.0);
  for (int o = 0; o < s.out_channels; ++o)
    for (int i = 0; i < dout.rows(); ++i)
      for (int j = 0; j < dout.cols(); ++j) {
        const double d = dout.at(o, i, j);
        if (d == 0.0) continue;
        grad.bias[o] += d;
        for (int ic = 0; ic < s.in_channels; ++ic)
          for (int u = 0; u < s.kernel; ++u)
            for (int v = 0; v < s.kernel; ++v) {
              grad.weights[((std::size_t(o) * s.in_channels + ic) * s.kernel + u) * s.kernel + v] +=
                  d * in.at(ic, i * s.stride + u, j * s.stride + v);
              din.at(ic, i * s.stride + u, j * s.stride + v) += d * layer.weight(o, ic, u, v);
            }
      }
}

}  // namespace

LogitTensor model_forward(const ModelParams& params, const Tensor3& image,
                          ForwardCache* cache) {
  if (params.empty()) throw Error("model has no layers");
  if (cache) {
    cache->acts.clear();
    cache->acts.push_back(image);
  }
  Tensor3 cur = image;
  for (const ConvLayer& layer : params) {
    cur = conv_forward(layer, cur);
    if (cache) cache->acts.push_back(cur);
  }
  std::vector<double> data(cur.data().begin(), cur.data().end());
  return LogitTensor::from_values(cur.channels() - 1, cur.rows(), cur.cols(), std::move(data));
}

ModelGrad model_backward(const ModelParams& params, const ForwardCache& cache,
                         const Tensor3& dlogits) {
  if (cache.acts.size() != params.size() + 1)
    throw ShapeMismatchError("forward cache does not match the model");
  if (!dlogits.same_shape(cache.acts.back()))
    throw ShapeMismatchError("dlogits shape does not match the model output");

  ModelGrad grads(params.size());
  Tensor3 dcur = dlogits;
  for (int li = int(params.size()) - 1; li >= 0; --li) {
    const Tensor3& out = cache.acts[li + 1];
    if (params[li].spec.relu)
      for (std::size_t i = 0; i < dcur.size(); ++i)
        if (out.data()[i] <= 0.0) dcur.data()[i] = 0.0;
    Tensor3 din;
    conv_backward(params[li], cache.acts[li], dcur, grads[li], din);
    dcur = std::move(din);
  }
  return grads;
}

ModelGrad zero_like(const ModelParams& params) {
  ModelGrad g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    g[i].weights.assign(params[i].weights.size(), 0.0);
    g[i].bias.assign(params[i].bias.size(), 0.0);
  }
  return g;
}

void accumulate(ModelGrad& into, const ModelGrad& g, double scale) {
  for (std::size_t li = 0; li < into.size(); ++li) {
    for (std::size_t i = 0; i < into[li].weights.size(); ++i)
      into[li].weights[i] += scale * g[li].weights[i];
    for (std::size_t i = 0; i < into[li].bias.size(); ++i)
      into[li].bias[i] += scale * g[li].bias[i];
  }
}

void sgd_step(ModelParams& params, const ModelGrad& g, double lr) {
  for (std::size_t li = 0; li < params.size(); ++li) {
    for (std::size_t i = 0; i < params[li].weights.size(); ++i)
      params[li].weights[i] -= lr * g[li].weights[i];
    for (std::size_t i = 0; i < params[li].bias.size(); ++i)
      params[li].bias[i] -= lr * g[li].bias[i];
  }
}

}  // namespace mil::harness
