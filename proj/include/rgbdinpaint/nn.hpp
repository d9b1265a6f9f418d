/* Copyright 2026 The rgbd-inpaint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RGBDINPAINT_NN_HPP_
#define RGBDINPAINT_NN_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rgbdinpaint/conv.hpp"
#include "rgbdinpaint/ops.hpp"
#include "rgbdinpaint/rng.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

enum class LayerKind { kConv, kDeconvBlock, kFc, kActivation };

// Declarative layer description. Kinds:
//   kConv        convolution, then optional activation
//   kDeconvBlock nearest upsample by up_factor, then convolution + activation
//   kFc          fully connected on (B, in) inputs
//   kActivation  activation only, no parameters
struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int64_t in_channels = 0;
  int64_t out_channels = 0;
  int64_t kernel_h = 1, kernel_w = 1;
  int64_t stride_h = 1, stride_w = 1;
  int64_t dil_h = 1, dil_w = 1;
  bool same_pad = true;  // pad = dil*(k-1)/2 per axis; stride-1 convs keep H,W
  int64_t pad_h = 0, pad_w = 0;  // used when same_pad == false
  int64_t up_factor = 2;         // kDeconvBlock only
  bool has_activation = false;
  ActKind act = ActKind::kRelu;
  double act_param = 0.0;  // slope for leaky relu, alpha for elu

  int64_t resolved_pad_h() const {
    return same_pad ? dil_h * (kernel_h - 1) / 2 : pad_h;
  }
  int64_t resolved_pad_w() const {
    return same_pad ? dil_w * (kernel_w - 1) / 2 : pad_w;
  }

  void validate() const {
    if (kind == LayerKind::kActivation) return;
    if (in_channels < 1 || out_channels < 1)
      throw ConfigError("layer spec: channel counts must be positive");
    if (kind == LayerKind::kFc) return;
    if (dil_h < 1 || dil_w < 1) throw ConfigError("layer spec: dilation must be >= 1");
    if (same_pad && (kernel_h % 2 == 0 || kernel_w % 2 == 0))
      throw ConfigError("layer spec: same padding requires odd kernels");
    if (kind == LayerKind::kDeconvBlock && up_factor < 1)
      throw ConfigError("layer spec: upsample factor must be >= 1");
  }
};

inline LayerSpec conv_spec(int64_t in_ch, int64_t out_ch, int64_t kernel, int64_t stride,
                           int64_t dilation, ActKind act, double act_param = 0.0,
                           bool with_act = true) {
  LayerSpec s;
  s.kind = LayerKind::kConv;
  s.in_channels = in_ch;
  s.out_channels = out_ch;
  s.kernel_h = s.kernel_w = kernel;
  s.stride_h = s.stride_w = stride;
  s.dil_h = s.dil_w = dilation;
  s.has_activation = with_act;
  s.act = act;
  s.act_param = act_param;
  return s;
}

inline LayerSpec deconv_block_spec(int64_t in_ch, int64_t out_ch, int64_t kernel, int64_t factor,
                                   ActKind act, double act_param = 0.0) {
  LayerSpec s = conv_spec(in_ch, out_ch, kernel, 1, 1, act, act_param);
  s.kind = LayerKind::kDeconvBlock;
  s.up_factor = factor;
  return s;
}

inline LayerSpec fc_spec(int64_t in_features, int64_t out_features, bool with_act = false,
                         ActKind act = ActKind::kRelu, double act_param = 0.0) {
  LayerSpec s;
  s.kind = LayerKind::kFc;
  s.in_channels = in_features;
  s.out_channels = out_features;
  s.has_activation = with_act;
  s.act = act;
  s.act_param = act_param;
  return s;
}

template <typename T>
struct LayerParams {
  Tensor<T> weight;  // conv: (F,C,kh,kw); fc: (out,in)
  Tensor<T> bias;    // (F) / (out)
};

// Glorot-uniform weights, zero biases. Weight values are drawn sequentially
// in storage order, so a fixed seed reproduces parameters exactly.
template <typename T>
LayerParams<T> init_params(const LayerSpec& spec, Rng& rng) {
  spec.validate();
  LayerParams<T> p;
  if (spec.kind == LayerKind::kActivation) return p;

  Shape w_shape;
  double fan_in = 0, fan_out = 0;
  if (spec.kind == LayerKind::kFc) {
    w_shape = {spec.out_channels, spec.in_channels};
    fan_in = static_cast<double>(spec.in_channels);
    fan_out = static_cast<double>(spec.out_channels);
  } else {
    w_shape = {spec.out_channels, spec.in_channels, spec.kernel_h, spec.kernel_w};
    fan_in = static_cast<double>(spec.in_channels * spec.kernel_h * spec.kernel_w);
    fan_out = static_cast<double>(spec.out_channels * spec.kernel_h * spec.kernel_w);
  }
  double bound = std::sqrt(6.0 / (fan_in + fan_out));
  std::vector<T> w(static_cast<size_t>(numel_of(w_shape)));
  for (auto& v : w) v = static_cast<T>(rng.uniform(-bound, bound));
  p.weight = Tensor<T>::from(std::move(w_shape), std::move(w), /*requires_grad=*/true);
  p.bias = Tensor<T>::zeros({spec.out_channels}, /*requires_grad=*/true);
  return p;
}

template <typename T>
Tensor<T> layer_forward(const LayerSpec& spec, const LayerParams<T>& params, const Tensor<T>& x) {
  spec.validate();
  Tensor<T> y = x;
  switch (spec.kind) {
    case LayerKind::kActivation:
      break;
    case LayerKind::kDeconvBlock:
      y = upsample_nearest(y, spec.up_factor);
      [[fallthrough]];
    case LayerKind::kConv: {
      if (y.rank() != 4)
        throw ShapeError("conv layer expects (B,C,H,W) input, got " + shape_str(y.shape()));
      if (y.extent(1) != spec.in_channels)
        throw ShapeError("conv layer expects " + std::to_string(spec.in_channels) +
                         " input channels, got " + std::to_string(y.extent(1)));
      Conv2dAttrs attrs{spec.stride_h, spec.stride_w, spec.resolved_pad_h(),
                        spec.resolved_pad_w(), spec.dil_h, spec.dil_w};
      y = conv2d(y, params.weight, params.bias, attrs);
      break;
    }
    case LayerKind::kFc: {
      if (y.rank() != 2)
        throw ShapeError("fc layer expects (B,features) input, got " + shape_str(y.shape()));
      if (y.extent(1) != spec.in_channels)
        throw ShapeError("fc layer expects " + std::to_string(spec.in_channels) +
                         " input features, got " + std::to_string(y.extent(1)));
      y = add(matmul(y, transpose(params.weight)), reshape(params.bias, {1, spec.out_channels}));
      break;
    }
  }
  if (spec.has_activation) y = activation(spec.act, y, static_cast<T>(spec.act_param));
  return y;
}

// Named parameter registry. Names are hierarchical ("rgb_encoder.conv1.weight");
// iteration order is lexicographic and therefore stable across runs, which the
// optimizer, checkpoint format, and gradient bookkeeping all rely on.
template <typename T>
class ParamStore {
 public:
  void add(const std::string& name, Tensor<T> tensor) {
    if (!tensor.defined()) throw ConfigError("ParamStore: undefined tensor for " + name);
    auto [it, inserted] = params_.emplace(name, std::move(tensor));
    if (!inserted) throw ConfigError("ParamStore: duplicate parameter name " + name);
  }

  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  const Tensor<T>& at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("ParamStore: unknown parameter " + name);
    return it->second;
  }

  void replace(const std::string& name, Tensor<T> tensor) {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("ParamStore: unknown parameter " + name);
    if (tensor.shape() != it->second.shape())
      throw ShapeError("ParamStore: shape mismatch replacing " + name);
    it->second = std::move(tensor);
  }

  const std::map<std::string, Tensor<T>>& all() const { return params_; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(params_.size());
    for (const auto& [k, v] : params_) out.push_back(k);
    return out;
  }

  std::vector<Tensor<T>> tensors() const {
    std::vector<Tensor<T>> out;
    out.reserve(params_.size());
    for (const auto& [k, v] : params_) out.push_back(v);
    return out;
  }

  int64_t total_parameters() const {
    int64_t n = 0;
    for (const auto& [k, v] : params_) n += v.numel();
    return n;
  }

 private:
  std::map<std::string, Tensor<T>> params_;
};

// A named layer bound to a store.
template <typename T>
struct Layer {
  LayerSpec spec;
  std::string name;

  void init(ParamStore<T>& store, Rng& rng) const {
    LayerParams<T> p = init_params<T>(spec, rng);
    if (p.weight.defined()) store.add(name + ".weight", p.weight);
    if (p.bias.defined()) store.add(name + ".bias", p.bias);
  }

  Tensor<T> forward(const ParamStore<T>& store, const Tensor<T>& x) const {
    LayerParams<T> p;
    if (spec.kind != LayerKind::kActivation) {
      p.weight = store.at(name + ".weight");
      p.bias = store.at(name + ".bias");
    }
    return layer_forward(spec, p, x);
  }
};

template <typename T>
Tensor<T> forward_chain(const std::vector<Layer<T>>& layers, const ParamStore<T>& store,
                        Tensor<T> x) {
  for (const auto& layer : layers) x = layer.forward(store, x);
  return x;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_NN_HPP_
