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

#ifndef RGBDINPAINT_MODELS_HPP_
#define RGBDINPAINT_MODELS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rgbdinpaint/nn.hpp"
#include "rgbdinpaint/ops.hpp"
#include "rgbdinpaint/rng.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

enum class FusionVariant { kLateFusion, kEarlyFusion, kNoFusion };

inline const char* variant_name(FusionVariant v) {
  switch (v) {
    case FusionVariant::kLateFusion: return "late";
    case FusionVariant::kEarlyFusion: return "early";
    case FusionVariant::kNoFusion: return "none";
  }
  return "?";
}

inline FusionVariant variant_from_name(const std::string& s) {
  if (s == "late") return FusionVariant::kLateFusion;
  if (s == "early") return FusionVariant::kEarlyFusion;
  if (s == "none") return FusionVariant::kNoFusion;
  throw ConfigError("unknown fusion variant '" + s + "' (expected late|early|none)");
}

// Axis-aligned hole. The mask tensor convention everywhere is 1 = known
// pixel, 0 = hole.
struct MaskRect {
  int64_t top = 0, left = 0, height = 0, width = 0;

  void validate(int64_t image_size) const {
    if (height < 1 || width < 1)
      throw DomainError("mask rect is degenerate (zero area)");
    if (top < 0 || left < 0 || top + height > image_size || left + width > image_size)
      throw DomainError("mask rect exceeds image bounds");
  }
};

struct GeneratorConfig {
  FusionVariant variant = FusionVariant::kLateFusion;
  int64_t image_size = 64;  // square; two stride-2 downsamples need /4
  int64_t base_channels = 8;
  std::array<int64_t, 4> fusion_dilations = {2, 4, 8, 16};
  uint64_t seed = 0;

  void validate() const {
    if (image_size < 8 || image_size % 4 != 0)
      throw ConfigError("generator image_size must be >= 8 and divisible by 4");
    if (base_channels < 1) throw ConfigError("generator base_channels must be >= 1");
    for (int64_t d : fusion_dilations)
      if (d < 1) throw ConfigError("fusion dilations must be >= 1");
  }
};

// Joint RGB + depth inpainting generator. Three wirings share the same
// encoder/fusion/decoder building blocks:
//   late fusion   two encoders, features concatenated before the dilated stack
//   early fusion  one encoder over the stacked 5-channel input
//   no fusion     two completely independent networks
// Inputs are masked images plus the binary mask; outputs are tanh-bounded
// full-resolution RGB and depth predictions.
template <typename T>
class GeneratorModel {
 public:
  explicit GeneratorModel(const GeneratorConfig& config) : config_(config) {
    config_.validate();
    Rng rng = Rng::stream(config_.seed, 0x67656e);  // generator stream
    int64_t b = config_.base_channels;
    const auto& dil = config_.fusion_dilations;

    switch (config_.variant) {
      case FusionVariant::kLateFusion:
        rgb_encoder_ = make_encoder("rgb_encoder", 4, b);
        depth_encoder_ = make_encoder("depth_encoder", 2, b);
        fusion_ = make_fusion("fusion", 8 * b, 8 * b, dil);
        rgb_decoder_ = make_decoder("rgb_decoder", 8 * b, b, 3);
        depth_decoder_ = make_decoder("depth_decoder", 8 * b, b, 1);
        break;
      case FusionVariant::kEarlyFusion:
        rgb_encoder_ = make_encoder("encoder", 5, b);
        fusion_ = make_fusion("fusion", 4 * b, 8 * b, dil);
        rgb_decoder_ = make_decoder("decoder", 8 * b, b, 4);
        break;
      case FusionVariant::kNoFusion:
        rgb_encoder_ = make_encoder("rgb_net.encoder", 4, b);
        fusion_ = make_fusion("rgb_net.mid", 4 * b, 8 * b, dil);
        rgb_decoder_ = make_decoder("rgb_net.decoder", 8 * b, b, 3);
        depth_encoder_ = make_encoder("depth_net.encoder", 2, b);
        depth_fusion_ = make_fusion("depth_net.mid", 4 * b, 8 * b, dil);
        depth_decoder_ = make_decoder("depth_net.decoder", 8 * b, b, 1);
        break;
    }

    for (const auto* group : {&rgb_encoder_, &depth_encoder_, &fusion_, &depth_fusion_,
                              &rgb_decoder_, &depth_decoder_})
      for (const auto& layer : *group) layer.init(params_, rng);
  }

  const GeneratorConfig& config() const { return config_; }
  ParamStore<T>& params() { return params_; }
  const ParamStore<T>& params() const { return params_; }

  // masked rgb (B,3,S,S), masked depth (B,1,S,S), mask (B,1,S,S) ->
  // raw rgb (B,3,S,S), raw depth (B,1,S,S), both in (-1,1).
  std::pair<Tensor<T>, Tensor<T>> forward(const Tensor<T>& masked_rgb,
                                          const Tensor<T>& masked_depth,
                                          const Tensor<T>& mask) const {
    check_input(masked_rgb, 3, "masked_rgb");
    check_input(masked_depth, 1, "masked_depth");
    check_input(mask, 1, "mask");
    if (masked_rgb.extent(0) != masked_depth.extent(0) ||
        masked_rgb.extent(0) != mask.extent(0))
      throw ShapeError("generator_forward: batch extents differ");

    switch (config_.variant) {
      case FusionVariant::kLateFusion: {
        Tensor<T> f_rgb =
            forward_chain(rgb_encoder_, params_, concat<T>({masked_rgb, mask}, 1));
        Tensor<T> f_depth =
            forward_chain(depth_encoder_, params_, concat<T>({masked_depth, mask}, 1));
        Tensor<T> fused = forward_chain(fusion_, params_, concat<T>({f_rgb, f_depth}, 1));
        return {forward_chain(rgb_decoder_, params_, fused),
                forward_chain(depth_decoder_, params_, fused)};
      }
      case FusionVariant::kEarlyFusion: {
        Tensor<T> f = forward_chain(rgb_encoder_, params_,
                                    concat<T>({masked_rgb, masked_depth, mask}, 1));
        Tensor<T> out = forward_chain(rgb_decoder_, params_, forward_chain(fusion_, params_, f));
        int64_t batch = out.extent(0), s = out.extent(2);
        Tensor<T> rgb = slice(out, {0, 0, 0, 0}, {batch, 3, s, s});
        Tensor<T> depth = slice(out, {0, 3, 0, 0}, {batch, 1, s, s});
        return {rgb, depth};
      }
      case FusionVariant::kNoFusion: {
        Tensor<T> rgb = forward_chain(
            rgb_decoder_, params_,
            forward_chain(fusion_, params_,
                          forward_chain(rgb_encoder_, params_, concat<T>({masked_rgb, mask}, 1))));
        Tensor<T> depth = forward_chain(
            depth_decoder_, params_,
            forward_chain(depth_fusion_, params_,
                          forward_chain(depth_encoder_, params_,
                                        concat<T>({masked_depth, mask}, 1))));
        return {rgb, depth};
      }
    }
    throw Error("unreachable variant");
  }

 private:
  void check_input(const Tensor<T>& x, int64_t channels, const char* what) const {
    if (x.rank() != 4 || x.extent(1) != channels || x.extent(2) != config_.image_size ||
        x.extent(3) != config_.image_size)
      throw ShapeError(std::string("generator_forward: ") + what + " must be (B," +
                       std::to_string(channels) + "," + std::to_string(config_.image_size) + "," +
                       std::to_string(config_.image_size) + "), got " + shape_str(x.shape()));
  }

  std::vector<Layer<T>> make_encoder(const std::string& prefix, int64_t in_ch, int64_t b) const {
    return {
        {conv_spec(in_ch, b, 5, 1, 1, ActKind::kRelu), prefix + ".conv1"},
        {conv_spec(b, 2 * b, 3, 2, 1, ActKind::kRelu), prefix + ".conv2"},
        {conv_spec(2 * b, 4 * b, 3, 2, 1, ActKind::kRelu), prefix + ".conv3"},
    };
  }

  std::vector<Layer<T>> make_fusion(const std::string& prefix, int64_t in_ch, int64_t ch,
                                    const std::array<int64_t, 4>& dil) const {
    std::vector<Layer<T>> layers = {
        {conv_spec(in_ch, ch, 3, 1, 1, ActKind::kRelu), prefix + ".conv_in"}};
    for (size_t i = 0; i < dil.size(); ++i)
      layers.push_back(
          {conv_spec(ch, ch, 3, 1, dil[i], ActKind::kRelu), prefix + ".dilated" + std::to_string(i + 1)});
    layers.push_back({conv_spec(ch, ch, 3, 1, 1, ActKind::kRelu), prefix + ".conv_out"});
    return layers;
  }

  std::vector<Layer<T>> make_decoder(const std::string& prefix, int64_t in_ch, int64_t b,
                                     int64_t out_ch) const {
    return {
        {deconv_block_spec(in_ch, 4 * b, 3, 2, ActKind::kRelu), prefix + ".up1"},
        {deconv_block_spec(4 * b, 2 * b, 3, 2, ActKind::kRelu), prefix + ".up2"},
        {conv_spec(2 * b, b, 3, 1, 1, ActKind::kRelu), prefix + ".conv3"},
        {conv_spec(b, out_ch, 3, 1, 1, ActKind::kTanh), prefix + ".head"},
    };
  }

  GeneratorConfig config_;
  ParamStore<T> params_;
  std::vector<Layer<T>> rgb_encoder_, depth_encoder_;
  std::vector<Layer<T>> fusion_, depth_fusion_;
  std::vector<Layer<T>> rgb_decoder_, depth_decoder_;
};

enum class CriticScope { kGlobal, kLocal };

struct CriticConfig {
  CriticScope scope = CriticScope::kGlobal;
  int64_t input_size = 64;  // square spatial extent of the 4-channel input
  int64_t channels = 16;
  uint64_t seed = 0;

  void validate() const {
    if (input_size < 8) throw ConfigError("critic input_size must be >= 8");
    if (channels < 1) throw ConfigError("critic channels must be >= 1");
  }
};

// WGAN critic over 4-channel RGB-D input: stride-2 convolutions down to a
// small grid, then one linear head. Output is one unbounded score per batch
// element; there is deliberately no terminal sigmoid.
template <typename T>
class CriticModel {
 public:
  explicit CriticModel(const CriticConfig& config) : config_(config) {
    config_.validate();
    Rng rng = Rng::stream(config_.seed,
                          config_.scope == CriticScope::kGlobal ? 0x6467 : 0x646c);
    int64_t ch = 4;
    int64_t size = config_.input_size;
    int layer_idx = 1;
    while (size > 4) {
      int64_t out_ch = std::min<int64_t>(config_.channels * (int64_t(1) << (layer_idx - 1)),
                                         config_.channels * 4);
      convs_.push_back({conv_spec(ch, out_ch, 5, 2, 1, ActKind::kLeakyRelu, 0.2),
                        "conv" + std::to_string(layer_idx)});
      ch = out_ch;
      size = (size - 1) / 2 + 1;
      ++layer_idx;
    }
    flat_features_ = ch * size * size;
    fc_ = {fc_spec(flat_features_, 1), "fc"};
    for (const auto& layer : convs_) layer.init(params_, rng);
    fc_.init(params_, rng);
  }

  const CriticConfig& config() const { return config_; }
  ParamStore<T>& params() { return params_; }
  const ParamStore<T>& params() const { return params_; }

  // (B,4,S,S) -> (B,) unbounded scores.
  Tensor<T> forward(const Tensor<T>& x) const {
    if (x.rank() != 4 || x.extent(1) != 4 || x.extent(2) != config_.input_size ||
        x.extent(3) != config_.input_size)
      throw ShapeError("critic_forward: input must be (B,4," + std::to_string(config_.input_size) +
                       "," + std::to_string(config_.input_size) + "), got " +
                       shape_str(x.shape()));
    Tensor<T> y = forward_chain(convs_, params_, x);
    y = reshape(y, {x.extent(0), flat_features_});
    y = fc_.forward(params_, y);
    return reshape(y, {x.extent(0)});
  }

 private:
  CriticConfig config_;
  ParamStore<T> params_;
  std::vector<Layer<T>> convs_;
  Layer<T> fc_{};
  int64_t flat_features_ = 0;
};

template <typename T>
GeneratorModel<T> build_generator(const GeneratorConfig& config) {
  return GeneratorModel<T>(config);
}

// Keeps known pixels exactly and fills holes from the raw prediction:
// result = masked + raw * (1 - mask). Because the mask is binary, known
// pixels survive bit-for-bit.
template <typename T>
Tensor<T> composite(const Tensor<T>& raw, const Tensor<T>& masked, const Tensor<T>& mask) {
  Tensor<T> hole = sub(Tensor<T>::scalar(T(1)), mask);
  return add(masked, mul(raw, hole));
}

// Crops the square bounding box centred on `rect` (clamped into the image)
// and resizes it to patch_size x patch_size with nearest neighbour, so the
// local critic always sees a fixed-shape input regardless of hole size.
template <typename T>
Tensor<T> extract_local_patch(const Tensor<T>& x, const MaskRect& rect, int64_t patch_size) {
  if (x.rank() != 4) throw ShapeError("extract_local_patch: input must be (B,C,H,W)");
  if (x.extent(2) != x.extent(3))
    throw ShapeError("extract_local_patch: input must be square");
  int64_t s = x.extent(2);
  rect.validate(s);
  if (patch_size < 1) throw ConfigError("extract_local_patch: patch size must be >= 1");

  int64_t side = std::max(rect.height, rect.width);
  side = std::min(side, s);
  int64_t top = rect.top + rect.height / 2 - side / 2;
  int64_t left = rect.left + rect.width / 2 - side / 2;
  top = std::max<int64_t>(0, std::min(top, s - side));
  left = std::max<int64_t>(0, std::min(left, s - side));

  Tensor<T> crop = slice(x, {0, 0, top, left}, {x.extent(0), x.extent(1), side, side});
  return nearest_resize(crop, patch_size, patch_size);
}

// Per-sample patch extraction: rects[b] selects the patch of batch element b.
template <typename T>
Tensor<T> extract_local_patches(const Tensor<T>& x, const std::vector<MaskRect>& rects,
                                int64_t patch_size) {
  if (x.rank() != 4 || static_cast<int64_t>(rects.size()) != x.extent(0))
    throw ShapeError("extract_local_patches: one rect per batch element required");
  std::vector<Tensor<T>> patches;
  patches.reserve(rects.size());
  for (int64_t b = 0; b < x.extent(0); ++b) {
    Tensor<T> one = slice(x, {b, 0, 0, 0}, {1, x.extent(1), x.extent(2), x.extent(3)});
    patches.push_back(extract_local_patch(one, rects[static_cast<size_t>(b)], patch_size));
  }
  return patches.size() == 1 ? patches[0] : concat(patches, 0);
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_MODELS_HPP_
