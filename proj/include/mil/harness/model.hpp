#pragma once

#include <vector>

#include "mil/rng.hpp"
#include "mil/tensor.hpp"

namespace mil::harness {

// Valid-mode cross-correlation layer, optionally followed by a rectifier.
// init_gain multiplies the sqrt(2 / fan-in) initialization std; gradients
// reaching the layers below scale with this layer's weight magnitude, so a
// gain above 1 on the head speeds up feature learning under a fixed small
// SGD step.
struct ConvLayerSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 0;
  int stride = 1;
  bool relu = false;
  double init_gain = 1.0;
};

struct ConvLayer {
  ConvLayerSpec spec;
  std::vector<double> weights;  // [out][in][u][v] row-major
  std::vector<double> bias;     // [out]

  double weight(int o, int ic, int u, int v) const {
    return weights[((std::size_t(o) * spec.in_channels + ic) * spec.kernel + u) * spec.kernel + v];
  }
  double& weight(int o, int ic, int u, int v) {
    return weights[((std::size_t(o) * spec.in_channels + ic) * spec.kernel + u) * spec.kernel + v];
  }
};

using ModelParams = std::vector<ConvLayer>;

struct LayerGrad {
  std::vector<double> weights;
  std::vector<double> bias;
};
using ModelGrad = std::vector<LayerGrad>;

// Two 5x5 stride-2 rectified feature layers (8 then 32 channels) and a 1x1
// detection head mapping to C+1 score channels. All-convolutional: any
// canvas at least 14x14 yields some (C+1, M, N) logit grid; 24x24 gives 3x3.
std::vector<ConvLayerSpec> default_architecture(int num_classes);

// Kernel entries drawn normal with std init_gain * sqrt(2 / fan-in),
// biases zero.
ModelParams init_params(const std::vector<ConvLayerSpec>& arch, Rng& rng);

// Layer inputs/outputs kept for the backward pass: acts[0] is the image,
// acts[i+1] the post-rectifier output of layer i.
struct ForwardCache {
  std::vector<Tensor3> acts;
};

// Deterministic logits; the last layer's channel count fixes C+1. Throws
// InputTooSmallError when some layer's input is smaller than its kernel and
// ShapeMismatchError on a channel-count mismatch.
LogitTensor model_forward(const ModelParams& params, const Tensor3& image,
                          ForwardCache* cache = nullptr);

// Exact reverse-mode gradients of <dlogits, logits> for every parameter.
ModelGrad model_backward(const ModelParams& params, const ForwardCache& cache,
                         const Tensor3& dlogits);

ModelGrad zero_like(const ModelParams& params);
void accumulate(ModelGrad& into, const ModelGrad& g, double scale);
void sgd_step(ModelParams& params, const ModelGrad& g, double lr);

}  // namespace mil::harness
