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

#ifndef RGBDINPAINT_LOSSES_HPP_
#define RGBDINPAINT_LOSSES_HPP_

#include <cstdint>
#include <vector>

#include "rgbdinpaint/ops.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

struct LossWeights {
  double alpha = 1.0;       // depth share of the content loss
  double lambda_gp = 10.0;  // gradient-penalty coefficient
  double beta_adv = 0.001;  // adversarial share of the generator objective

  void validate() const {
    if (alpha < 0 || lambda_gp < 0 || beta_adv < 0)
      throw ConfigError("loss weights must be non-negative");
  }
};

// Minimax value of the original GAN game for probability-valued discriminator
// outputs: E[log d_real] + E[log(1 - d_fake)]. Reference implementation used
// in tests only; training uses the Wasserstein losses below.
template <typename T>
Tensor<T> vanilla_gan_value(const Tensor<T>& d_real, const Tensor<T>& d_fake) {
  for (T v : d_real.data())
    if (!(v > T(0) && v < T(1)))
      throw DomainError("vanilla_gan_value: d_real must lie in (0,1)");
  for (T v : d_fake.data())
    if (!(v > T(0) && v < T(1)))
      throw DomainError("vanilla_gan_value: d_fake must lie in (0,1)");
  return add(mean_all(log(d_real)), mean_all(log(sub(Tensor<T>::scalar(T(1)), d_fake))));
}

// Critic objective (to minimize): mean(d_fake) - mean(d_real).
template <typename T>
Tensor<T> wgan_critic_loss(const Tensor<T>& d_real, const Tensor<T>& d_fake) {
  return sub(mean_all(d_fake), mean_all(d_real));
}

// Generator objective (to minimize): -mean(d_fake).
template <typename T>
Tensor<T> wgan_generator_loss(const Tensor<T>& d_fake) {
  return neg(mean_all(d_fake));
}

// Per-sample convex combination along straight lines between real and
// generated samples: (1-t) * real + t * fake, one t per batch element.
template <typename T>
Tensor<T> interpolate_samples(const Tensor<T>& real, const Tensor<T>& fake, const Tensor<T>& t) {
  if (real.shape() != fake.shape())
    throw ShapeError("interpolate_samples: endpoint shapes differ");
  if (t.rank() != 1 || t.extent(0) != real.extent(0))
    throw ShapeError("interpolate_samples: t must be (B,)");
  for (T v : t.data())
    if (v < T(0) || v > T(1))
      throw DomainError("interpolate_samples: t must lie in [0,1]");
  Shape t_shape(static_cast<size_t>(real.rank()), 1);
  t_shape[0] = real.extent(0);
  Tensor<T> tb = reshape(t, t_shape);
  return add(mul(sub(Tensor<T>::scalar(T(1)), tb), real), mul(tb, fake));
}

namespace detail {
template <typename T>
constexpr T grad_norm_eps() {
  return std::is_same_v<T, float> ? T(1e-12) : T(1e-24);
}
}  // namespace detail

// Two-sided gradient penalty: lambda * E[(||d critic(x)/dx||_2 - 1)^2] over
// the given interpolates. The inner gradient is taken with create_graph, so
// the returned scalar differentiates through to the critic parameters.
// `critic` is any callable mapping (B,...) -> (B,).
template <typename T, typename CriticFn>
Tensor<T> gradient_penalty(const CriticFn& critic, const Tensor<T>& interpolates, T lambda_gp) {
  if (!interpolates.requires_grad())
    throw DisconnectedGradientError("gradient_penalty: interpolates must require grad");
  if (interpolates.rank() < 2)
    throw ShapeError("gradient_penalty: interpolates must have a batch dimension");
  Tensor<T> scores = critic(interpolates);
  if (scores.rank() != 1 || scores.extent(0) != interpolates.extent(0))
    throw ShapeError("gradient_penalty: critic must return one score per sample");

  // Samples are independent through the critic, so differentiating the summed
  // score yields each sample's own input gradient.
  Tensor<T> summed = sum_all(scores);
  Tensor<T> g = grad(summed, {interpolates}, /*create_graph=*/true)[0];

  std::vector<int64_t> feature_axes;
  for (int64_t d = 1; d < g.rank(); ++d) feature_axes.push_back(d);
  Tensor<T> sq_norm = sum(mul(g, g), feature_axes, false);
  Tensor<T> norm = sqrt(add(sq_norm, Tensor<T>::scalar(detail::grad_norm_eps<T>())));
  Tensor<T> excess = sub(norm, Tensor<T>::scalar(T(1)));
  return mul(mean_all(mul(excess, excess)), Tensor<T>::scalar(lambda_gp));
}

// l1 reconstruction over the full raw outputs: mean|rgb - rgb_gt| +
// alpha * mean|depth - depth_gt|.
template <typename T>
Tensor<T> content_loss(const Tensor<T>& raw_rgb, const Tensor<T>& rgb_gt,
                       const Tensor<T>& raw_depth, const Tensor<T>& depth_gt, T alpha) {
  if (raw_rgb.shape() != rgb_gt.shape() || raw_depth.shape() != depth_gt.shape())
    throw ShapeError("content_loss: prediction/target shapes differ");
  Tensor<T> rgb_l1 = mean_all(abs(sub(raw_rgb, rgb_gt)));
  Tensor<T> depth_l1 = mean_all(abs(sub(raw_depth, depth_gt)));
  return add(rgb_l1, mul(depth_l1, Tensor<T>::scalar(alpha)));
}

// content + beta * (global + local adversarial terms).
template <typename T>
Tensor<T> generator_objective(const Tensor<T>& content, const Tensor<T>& adv_global,
                              const Tensor<T>& adv_local, T beta_adv) {
  return add(content, mul(add(adv_global, adv_local), Tensor<T>::scalar(beta_adv)));
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_LOSSES_HPP_
