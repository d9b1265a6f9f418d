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

#include "oracles.hpp"
#include "rgbdinpaint/optim.hpp"

using rgbdinpaint::AdamConfig;
using Tensor = rgbdinpaint::Tensor<double>;

namespace ri = rgbdinpaint;

TEST_CASE("adam_step basics", "[optim]") {
  AdamConfig cfg;

  SECTION("first step approaches -lr * sign(grad) as eps -> 0") {
    cfg.epsilon = 1e-12;
    std::vector<double> p{1.0, -2.0}, g{0.3, -0.7}, m{0, 0}, v{0, 0};
    ri::adam_step<double>(p, g, m, v, cfg, 1);
    CHECK(p[0] == Approx(1.0 - cfg.learning_rate).epsilon(1e-6));
    CHECK(p[1] == Approx(-2.0 + cfg.learning_rate).epsilon(1e-6));
  }

  SECTION("zero gradient leaves fresh parameters unchanged") {
    std::vector<double> p{1.5}, g{0.0}, m{0}, v{0};
    ri::adam_step<double>(p, g, m, v, cfg, 1);
    CHECK(p[0] == 1.5);
    CHECK(m[0] == 0.0);
    CHECK(v[0] == 0.0);
  }

  SECTION("moments decay under zero gradient") {
    std::vector<double> p{1.0}, g{0.5}, m{0}, v{0};
    ri::adam_step<double>(p, g, m, v, cfg, 1);
    double m1 = m[0], v1 = v[0];
    std::vector<double> zero{0.0};
    ri::adam_step<double>(p, zero, m, v, cfg, 2);
    CHECK(m[0] == Approx(cfg.beta1 * m1).epsilon(1e-12));
    CHECK(v[0] == Approx(cfg.beta2 * v1).epsilon(1e-12));
  }

  SECTION("invalid step count") {
    std::vector<double> p{1.0}, g{0.0}, m{0}, v{0};
    CHECK_THROWS_AS(ri::adam_step<double>(p, g, m, v, cfg, 0), rgbdinpaint::ConfigError);
  }
}

TEST_CASE("adam matches the scalar reference trace on x^2", "[optim]") {
  AdamConfig cfg;
  oracles::ScalarAdam ref;
  double ref_x = 1.0;
  std::vector<double> p{1.0}, m{0}, v{0};
  for (int64_t t = 1; t <= 3; ++t) {
    double grad = 2.0 * ref_x;
    ref_x = ref.step(ref_x, grad, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
    std::vector<double> g{2.0 * p[0]};
    ri::adam_step<double>(p, g, m, v, cfg, t);
    CHECK(p[0] == Approx(ref_x).epsilon(1e-14));
  }
}

TEST_CASE("Adam over a ParamStore descends a quadratic", "[optim]") {
  ri::ParamStore<double> store;
  store.add("w", Tensor::from({3}, {1.0, -2.0, 0.5}, /*requires_grad=*/true));
  ri::Adam<double> opt(store, AdamConfig{.learning_rate = 0.05});

  double initial = 0, final_val = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Tensor w = store.at("w");
    Tensor loss = ri::sum_all(w * w);
    if (iter == 0) initial = loss.item();
    final_val = loss.item();
    auto grads = ri::grad(loss, store.tensors());
    opt.step(store, grads);
  }
  CHECK(final_val < 0.05 * initial);
  CHECK(opt.step_count() == 200);
}
