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

#ifndef RGBDINPAINT_OPTIM_HPP_
#define RGBDINPAINT_OPTIM_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rgbdinpaint/nn.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const {
    if (learning_rate <= 0) throw ConfigError("adam: learning rate must be > 0");
    if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1)
      throw ConfigError("adam: betas must lie in [0,1)");
    if (epsilon <= 0) throw ConfigError("adam: epsilon must be > 0");
  }
};

// Bias-corrected Adam update of one parameter buffer, in place. `t` is the
// 1-based step count after this update.
template <typename T>
void adam_step(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
               const AdamConfig& cfg, int64_t t) {
  if (param.size() != grad.size() || param.size() != m.size() || param.size() != v.size())
    throw ShapeError("adam_step: buffer sizes differ");
  if (t < 1) throw ConfigError("adam_step: step count must be >= 1");
  T lr = static_cast<T>(cfg.learning_rate);
  T b1 = static_cast<T>(cfg.beta1);
  T b2 = static_cast<T>(cfg.beta2);
  T eps = static_cast<T>(cfg.epsilon);
  T corr1 = T(1) - static_cast<T>(std::pow(cfg.beta1, static_cast<double>(t)));
  T corr2 = T(1) - static_cast<T>(std::pow(cfg.beta2, static_cast<double>(t)));
  for (size_t i = 0; i < param.size(); ++i) {
    T g = grad[i];
    m[i] = b1 * m[i] + (T(1) - b1) * g;
    v[i] = b2 * v[i] + (T(1) - b2) * g * g;
    T mhat = m[i] / corr1;
    T vhat = v[i] / corr2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

// Adam over a ParamStore. Moment tensors are owned here and serialized into
// checkpoints; parameter updates happen strictly between graph evaluations.
template <typename T>
class Adam {
 public:
  Adam(const ParamStore<T>& store, const AdamConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    for (const auto& [name, param] : store.all()) {
      m_.emplace(name, Tensor<T>::zeros(param.shape()));
      v_.emplace(name, Tensor<T>::zeros(param.shape()));
    }
  }

  // `grads` must align with store iteration order (lexicographic by name).
  void step(ParamStore<T>& store, const std::vector<Tensor<T>>& grads) {
    if (grads.size() != m_.size()) throw ShapeError("adam: gradient count mismatch");
    ++t_;
    size_t i = 0;
    for (const auto& [name, param] : store.all()) {
      Tensor<T> p = param;  // handle copy; shares the leaf storage
      adam_step<T>(p.mutable_data(), grads[i].data(), m_.at(name).mutable_data(),
                   v_.at(name).mutable_data(), cfg_, t_);
      ++i;
    }
  }

  int64_t step_count() const { return t_; }
  void set_step_count(int64_t t) { t_ = t; }
  const AdamConfig& config() const { return cfg_; }
  std::map<std::string, Tensor<T>>& first_moments() { return m_; }
  std::map<std::string, Tensor<T>>& second_moments() { return v_; }
  const std::map<std::string, Tensor<T>>& first_moments() const { return m_; }
  const std::map<std::string, Tensor<T>>& second_moments() const { return v_; }

 private:
  AdamConfig cfg_;
  int64_t t_ = 0;
  std::map<std::string, Tensor<T>> m_;
  std::map<std::string, Tensor<T>> v_;
};

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_OPTIM_HPP_
