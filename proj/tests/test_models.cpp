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

#include <catch2/catch.hpp>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "rgbdinpaint/models.hpp"

using rgbdinpaint::CriticConfig;
using rgbdinpaint::CriticScope;
using rgbdinpaint::FusionVariant;
using rgbdinpaint::GeneratorConfig;
using rgbdinpaint::MaskRect;
using rgbdinpaint::Rng;
using rgbdinpaint::Shape;

namespace ri = rgbdinpaint;

namespace {

template <typename T>
rgbdinpaint::Tensor<T> random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<T> d(static_cast<size_t>(rgbdinpaint::numel_of(shape)));
  for (auto& v : d) v = static_cast<T>(rng.uniform(lo, hi));
  return rgbdinpaint::Tensor<T>::from(std::move(shape), std::move(d));
}

template <typename T>
rgbdinpaint::Tensor<T> random_binary_mask(int64_t batch, int64_t s, Rng& rng) {
  std::vector<T> d(static_cast<size_t>(batch * s * s));
  for (auto& v : d) v = rng.uniform() < 0.5 ? T(0) : T(1);
  return rgbdinpaint::Tensor<T>::from({batch, 1, s, s}, std::move(d));
}

GeneratorConfig small_config(FusionVariant variant, int64_t s = 16, int64_t base = 2) {
  GeneratorConfig cfg;
  cfg.variant = variant;
  cfg.image_size = s;
  cfg.base_channels = base;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("generator registry structure per variant", "[models]") {
  SECTION("late fusion module prefixes") {
    auto model = ri::build_generator<float>(small_config(FusionVariant::kLateFusion, 64, 4));
    std::set<std::string> prefixes;
    for (const auto& name : model.params().names())
      prefixes.insert(name.substr(0, name.find('.')));
    CHECK(prefixes == std::set<std::string>{"rgb_encoder", "depth_encoder", "fusion",
                                            "rgb_decoder", "depth_decoder"});
  }

  SECTION("no fusion networks are disjoint") {
    auto model = ri::build_generator<float>(small_config(FusionVariant::kNoFusion));
    int rgb_names = 0, depth_names = 0;
    for (const auto& name : model.params().names()) {
      bool is_rgb = name.rfind("rgb_net.", 0) == 0;
      bool is_depth = name.rfind("depth_net.", 0) == 0;
      CHECK((is_rgb || is_depth));
      rgb_names += is_rgb;
      depth_names += is_depth;
    }
    CHECK(rgb_names > 0);
    CHECK(depth_names > 0);
  }

  SECTION("early fusion first conv takes 5 channels") {
    auto model = ri::build_generator<float>(small_config(FusionVariant::kEarlyFusion));
    CHECK(model.params().at("encoder.conv1.weight").extent(1) == 5);
  }

  SECTION("invalid image size rejected") {
    GeneratorConfig cfg = small_config(FusionVariant::kLateFusion);
    cfg.image_size = 18;  // not divisible by 4
    CHECK_THROWS_AS(ri::build_generator<float>(cfg), rgbdinpaint::ConfigError);
  }

  SECTION("same seed builds identical parameters") {
    auto a = ri::build_generator<float>(small_config(FusionVariant::kLateFusion));
    auto b = ri::build_generator<float>(small_config(FusionVariant::kLateFusion));
    auto an = a.params().names();
    for (const auto& name : an) {
      auto ta = a.params().at(name);
      auto tb = b.params().at(name);
      for (int64_t i = 0; i < ta.numel(); ++i)
        CHECK(ta.data()[static_cast<size_t>(i)] == tb.data()[static_cast<size_t>(i)]);
    }
  }
}

TEST_CASE("generator forward contract", "[models]") {
  Rng rng(123);
  const int64_t s = 16, batch = 2;

  for (FusionVariant variant :
       {FusionVariant::kLateFusion, FusionVariant::kEarlyFusion, FusionVariant::kNoFusion}) {
    auto model = ri::build_generator<float>(small_config(variant));
    auto rgb = random_tensor<float>({batch, 3, s, s}, rng);
    auto depth = random_tensor<float>({batch, 1, s, s}, rng);
    auto mask = random_binary_mask<float>(batch, s, rng);

    auto [raw_rgb, raw_depth] = model.forward(rgb, depth, mask);
    CHECK(raw_rgb.shape() == Shape{batch, 3, s, s});
    CHECK(raw_depth.shape() == Shape{batch, 1, s, s});
    for (float v : raw_rgb.data()) {
      CHECK(v > -1.0f);
      CHECK(v < 1.0f);
    }
    for (float v : raw_depth.data()) {
      CHECK(v > -1.0f);
      CHECK(v < 1.0f);
    }

    // bit-identical repeat
    auto [rgb2, depth2] = model.forward(rgb, depth, mask);
    for (int64_t i = 0; i < raw_rgb.numel(); ++i)
      CHECK(raw_rgb.data()[static_cast<size_t>(i)] == rgb2.data()[static_cast<size_t>(i)]);
    for (int64_t i = 0; i < raw_depth.numel(); ++i)
      CHECK(raw_depth.data()[static_cast<size_t>(i)] == depth2.data()[static_cast<size_t>(i)]);
  }

  SECTION("shape mismatch rejected") {
    auto model = ri::build_generator<float>(small_config(FusionVariant::kLateFusion));
    auto rgb = random_tensor<float>({batch, 3, s, s}, rng);
    auto depth = random_tensor<float>({batch, 1, s / 2, s / 2}, rng);
    auto mask = random_binary_mask<float>(batch, s, rng);
    CHECK_THROWS_AS(model.forward(rgb, depth, mask), rgbdinpaint::ShapeError);
  }
}

TEST_CASE("composite keeps known pixels exactly", "[models]") {
  Rng rng(9);
  const int64_t s = 8;
  auto raw = random_tensor<double>({1, 3, s, s}, rng);
  auto original = random_tensor<double>({1, 3, s, s}, rng);

  SECTION("all-ones mask returns the masked input bit for bit") {
    auto mask = rgbdinpaint::Tensor<double>::ones({1, 1, s, s});
    auto masked = ri::mul(original, mask);
    auto out = ri::composite(raw, masked, mask);
    for (int64_t i = 0; i < out.numel(); ++i)
      CHECK(out.data()[static_cast<size_t>(i)] == original.data()[static_cast<size_t>(i)]);
  }

  SECTION("all-zeros mask returns raw prediction") {
    auto mask = rgbdinpaint::Tensor<double>::zeros({1, 1, s, s});
    auto masked = ri::mul(original, mask);  // zero fill
    auto out = ri::composite(raw, masked, mask);
    for (int64_t i = 0; i < out.numel(); ++i)
      CHECK(out.data()[static_cast<size_t>(i)] == raw.data()[static_cast<size_t>(i)]);
  }

  SECTION("mixed mask: hole from raw, known pixels untouched, checked per pixel") {
    auto mask = random_binary_mask<double>(1, s, rng);
    auto masked = ri::mul(original, mask);
    auto out = ri::composite(raw, masked, mask);
    for (int64_t c = 0; c < 3; ++c)
      for (int64_t y = 0; y < s; ++y)
        for (int64_t x = 0; x < s; ++x) {
          size_t i = static_cast<size_t>((c * s + y) * s + x);
          size_t mi = static_cast<size_t>(y * s + x);
          double expect = mask.data()[mi] == 1.0 ? original.data()[i] : raw.data()[i];
          CHECK(out.data()[i] == expect);
        }
  }

  SECTION("known-pixel invariant out*m == masked*m bit-level") {
    auto mask = random_binary_mask<double>(1, s, rng);
    auto masked = ri::mul(original, mask);
    auto out = ri::composite(raw, masked, mask);
    auto lhs = ri::mul(out, mask);
    auto rhs = ri::mul(masked, mask);
    for (int64_t i = 0; i < lhs.numel(); ++i)
      CHECK(lhs.data()[static_cast<size_t>(i)] == rhs.data()[static_cast<size_t>(i)]);
  }
}

TEST_CASE("extract_local_patch", "[models]") {
  Rng rng(31);
  const int64_t s = 16;
  auto x = random_tensor<double>({2, 4, s, s}, rng);

  SECTION("rect covering the whole image with P=S is the identity") {
    auto patch = ri::extract_local_patch(x, MaskRect{0, 0, s, s}, s);
    REQUIRE(patch.shape() == x.shape());
    for (int64_t i = 0; i < x.numel(); ++i)
      CHECK(patch.data()[static_cast<size_t>(i)] == x.data()[static_cast<size_t>(i)]);
  }

  SECTION("1x1 rect replicates its neighbourhood pixel") {
    MaskRect rect{5, 7, 1, 1};
    auto patch = ri::extract_local_patch(x, rect, 4);
    REQUIRE(patch.shape() == Shape{2, 4, 4, 4});
    // independent nearest-resize oracle over the 1x1 crop
    for (int64_t b = 0; b < 2; ++b)
      for (int64_t c = 0; c < 4; ++c) {
        double v = x.data()[static_cast<size_t>(((b * 4 + c) * s + 5) * s + 7)];
        for (int64_t p = 0; p < 16; ++p)
          CHECK(patch.data()[static_cast<size_t>((b * 4 + c) * 16 + p)] == v);
      }
  }

  SECTION("general rect matches a direct crop+resize oracle") {
    MaskRect rect{3, 9, 4, 6};
    int64_t p_size = 8;
    auto patch = ri::extract_local_patch(x, rect, p_size);
    // oracle: square bbox of side 6 centred on the rect, clamped
    int64_t side = 6;
    int64_t top = std::clamp<int64_t>(rect.top + rect.height / 2 - side / 2, 0, s - side);
    int64_t left = std::clamp<int64_t>(rect.left + rect.width / 2 - side / 2, 0, s - side);
    for (int64_t b = 0; b < 2; ++b)
      for (int64_t c = 0; c < 4; ++c)
        for (int64_t py = 0; py < p_size; ++py)
          for (int64_t px = 0; px < p_size; ++px) {
            int64_t sy = top + py * side / p_size;
            int64_t sx = left + px * side / p_size;
            double expect = x.data()[static_cast<size_t>(((b * 4 + c) * s + sy) * s + sx)];
            double got = patch.data()[static_cast<size_t>(
                ((b * 4 + c) * p_size + py) * p_size + px)];
            CHECK(got == expect);
          }
  }

  SECTION("constant image gives constant patch") {
    auto ones = rgbdinpaint::Tensor<double>::full({1, 4, s, s}, 3.5);
    auto patch = ri::extract_local_patch(ones, MaskRect{2, 3, 5, 4}, 8);
    for (double v : patch.data()) CHECK(v == 3.5);
  }

  SECTION("degenerate rect is an error") {
    CHECK_THROWS_AS(ri::extract_local_patch(x, MaskRect{2, 3, 0, 4}, 8),
                    rgbdinpaint::DomainError);
  }
}

TEST_CASE("critic forward contract", "[models]") {
  CriticConfig cfg;
  cfg.scope = CriticScope::kGlobal;
  cfg.input_size = 16;
  cfg.channels = 4;
  cfg.seed = 5;
  ri::CriticModel<double> critic(cfg);
  Rng rng(55);
  auto x = random_tensor<double>({3, 4, 16, 16}, rng);

  SECTION("outputs one unbounded scalar per sample") {
    auto y = critic.forward(x);
    CHECK(y.shape() == Shape{3});
  }

  SECTION("zero-weight critic outputs zeros") {
    ri::CriticModel<double> zeroed(cfg);
    for (const auto& name : zeroed.params().names()) {
      auto t = zeroed.params().at(name);
      for (auto& v : t.mutable_data()) v = 0.0;
    }
    auto y = zeroed.forward(x);
    for (double v : y.data()) CHECK(v == 0.0);
  }

  SECTION("responds to input perturbation after init") {
    auto y0 = critic.forward(x).data()[0];
    auto x2 = x.detach();
    for (auto& v : x2.mutable_data()) v += 0.1;
    auto y1 = critic.forward(x2).data()[0];
    CHECK(y0 != y1);
  }

  SECTION("input size mismatch rejected") {
    CHECK_THROWS_AS(critic.forward(random_tensor<double>({1, 4, 8, 8}, rng)),
                    rgbdinpaint::ShapeError);
  }
}

TEST_CASE("fusion variants differ in gradient connectivity", "[models]") {
  Rng rng(321);
  const int64_t s = 16, batch = 1;
  auto rgb = random_tensor<double>({batch, 3, s, s}, rng);
  auto depth = random_tensor<double>({batch, 1, s, s}, rng);
  auto mask = random_binary_mask<double>(batch, s, rng);

  SECTION("no fusion: RGB loss is disconnected from depth parameters") {
    auto model = ri::build_generator<double>(small_config(FusionVariant::kNoFusion));
    auto [raw_rgb, raw_depth] = model.forward(rgb, depth, mask);
    auto rgb_loss = ri::sum_all(raw_rgb);
    auto depth_param = model.params().at("depth_net.encoder.conv1.weight");
    CHECK_THROWS_AS(ri::grad(rgb_loss, {depth_param}), rgbdinpaint::DisconnectedGradientError);
    auto depth_loss = ri::sum_all(raw_depth);
    auto rgb_param = model.params().at("rgb_net.encoder.conv1.weight");
    CHECK_THROWS_AS(ri::grad(depth_loss, {rgb_param}), rgbdinpaint::DisconnectedGradientError);
  }

  SECTION("late fusion: RGB output depends on depth encoder parameters") {
    auto model = ri::build_generator<double>(small_config(FusionVariant::kLateFusion));
    auto [raw_rgb, raw_depth] = model.forward(rgb, depth, mask);
    auto rgb_loss = ri::sum_all(raw_rgb);
    auto depth_param = model.params().at("depth_encoder.conv1.weight");
    auto g = ri::grad(rgb_loss, {depth_param});
    double max_abs = 0;
    for (double v : g[0].data()) max_abs = std::max(max_abs, std::abs(v));
    CHECK(max_abs > 0.0);
  }
}

TEST_CASE("dilated fusion stack spans a 61-pixel receptive field", "[models]") {
  // Four 3x3 convolutions with dilations 2,4,8,16 reach offsets up to
  // +-(2+4+8+16) = +-30, a 61-pixel span. Probe with all-ones kernels on a
  // wide single-row image: the gradient of one output pixel is nonzero only
  // inside the receptive field, and its extent measures the span.
  using Tensor = rgbdinpaint::Tensor<double>;
  const int64_t width = 81;
  Tensor x = Tensor::ones({1, 1, 1, width}, /*requires_grad=*/true);
  Tensor y = x;
  for (int64_t d : {2, 4, 8, 16}) {
    rgbdinpaint::Conv2dAttrs attrs{1, 1, d, d, d, d};
    y = ri::conv2d(y, Tensor::ones({1, 1, 3, 3}), attrs);
  }
  REQUIRE(y.shape() == Shape{1, 1, 1, width});
  int64_t center = width / 2;
  Tensor pixel = ri::slice(y, {0, 0, 0, center}, {1, 1, 1, 1});
  auto g = ri::grad(ri::sum_all(pixel), {x});
  int64_t first = -1, last = -1;
  for (int64_t i = 0; i < width; ++i) {
    if (g[0].data()[static_cast<size_t>(i)] != 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  }
  REQUIRE(first >= 0);
  int64_t span = last - first + 1;
  CHECK(span >= 61);
  CHECK(first == center - 30);
  CHECK(last == center + 30);
}
