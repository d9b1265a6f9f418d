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

#ifndef RGBDINPAINT_GRADCHECK_HPP_
#define RGBDINPAINT_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "rgbdinpaint/conv.hpp"
#include "rgbdinpaint/losses.hpp"
#include "rgbdinpaint/metrics.hpp"
#include "rgbdinpaint/models.hpp"
#include "rgbdinpaint/nn.hpp"
#include "rgbdinpaint/ops.hpp"
#include "rgbdinpaint/rng.hpp"
#include "rgbdinpaint/tensor.hpp"

namespace rgbdinpaint {

struct GradCheckCase {
  std::string name;
  double max_rel_err = 0;
  double tol = 0;
  bool ok = true;
};

struct GradCheckReport {
  std::vector<GradCheckCase> cases;

  bool ok() const {
    for (const auto& c : cases)
      if (!c.ok) return false;
    return true;
  }

  const GradCheckCase* first_failure() const {
    for (const auto& c : cases)
      if (!c.ok) return &c;
    return nullptr;
  }
};

// Max relative error between the reverse-mode gradient of build(inputs) with
// respect to inputs[wrt] and its central-difference estimate.
template <typename T, typename BuildFn>
double gradcheck_rel_error(const BuildFn& build, std::vector<Tensor<T>> inputs, size_t wrt,
                           T eps) {
  inputs[wrt] = inputs[wrt].detach();
  inputs[wrt].set_requires_grad(true);
  Tensor<T> out = build(inputs);
  Tensor<T> analytic = grad(out, {inputs[wrt]})[0];
  Tensor<T> probe_base = inputs[wrt].detach();
  Tensor<T> numeric = finite_difference_gradient(
      [&](const Tensor<T>& x) {
        std::vector<Tensor<T>> moved = inputs;
        moved[wrt] = x;
        return build(moved);
      },
      probe_base, eps);
  double worst = 0;
  for (int64_t i = 0; i < analytic.numel(); ++i) {
    double a = static_cast<double>(analytic.data()[static_cast<size_t>(i)]);
    double n = static_cast<double>(numeric.data()[static_cast<size_t>(i)]);
    worst = std::max(worst, std::abs(a - n) / std::max({1.0, std::abs(a), std::abs(n)}));
  }
  return worst;
}

namespace detail {

template <typename T>
Tensor<T> random_uniform(Shape shape, Rng& rng, double lo, double hi, bool requires_grad = false) {
  std::vector<T> d(static_cast<size_t>(numel_of(shape)));
  for (auto& v : d) v = static_cast<T>(rng.uniform(lo, hi));
  return Tensor<T>::from(std::move(shape), std::move(d), requires_grad);
}

// Random values bounded away from zero, for kinked ops (relu, abs, ...).
template <typename T>
Tensor<T> random_away_from_zero(Shape shape, Rng& rng, double min_abs = 0.2) {
  std::vector<T> d(static_cast<size_t>(numel_of(shape)));
  for (auto& v : d) {
    double mag = rng.uniform(min_abs, 1.5);
    v = static_cast<T>(rng.uniform() < 0.5 ? -mag : mag);
  }
  return Tensor<T>::from(std::move(shape), std::move(d));
}

inline Shape random_shape(Rng& rng, int64_t max_rank = 3, int64_t max_extent = 5) {
  int64_t rank = rng.uniform_int(1, max_rank);
  Shape s;
  for (int64_t i = 0; i < rank; ++i) s.push_back(rng.uniform_int(1, max_extent));
  return s;
}

// Contract a tensor to a scalar against a fixed random probe, so the check
// covers the full Jacobian rather than just row sums. The probe is a pure
// function of the seed: analytic and finite-difference evaluations of the
// same case must see identical probes.
template <typename T>
Tensor<T> probe_scalar(const Tensor<T>& out, uint64_t probe_seed) {
  Rng rng = Rng::stream(probe_seed, 0x9b0be);
  std::vector<T> p(static_cast<size_t>(out.numel()));
  for (auto& v : p) v = static_cast<T>(rng.uniform(-1.0, 1.0));
  Tensor<T> probe = Tensor<T>::from(out.shape(), std::move(p));
  return sum_all(mul(out, probe));
}

}  // namespace detail

// Analytic-vs-finite-difference checks for every differentiable op, over
// `trials` random shapes each.
template <typename T>
GradCheckReport run_gradient_suite(uint64_t seed, int trials, double tol) {
  GradCheckReport report;
  T eps = static_cast<T>(std::is_same_v<T, float> ? 1e-3 : 1e-5);

  auto run_case = [&](const std::string& name, auto&& one_trial) {
    GradCheckCase c;
    c.name = name;
    c.tol = tol;
    for (int t = 0; t < trials; ++t) {
      Rng rng = Rng::stream(seed, std::hash<std::string>{}(name), static_cast<uint64_t>(t));
      c.max_rel_err = std::max(c.max_rel_err, one_trial(rng));
    }
    c.ok = c.max_rel_err <= tol;
    report.cases.push_back(c);
  };

  auto binary_case = [&](const std::string& name, auto&& op, double lo, double hi,
                         bool broadcast) {
    run_case(name, [&, lo, hi, broadcast](Rng& rng) {
      Shape sa = detail::random_shape(rng);
      Shape sb = sa;
      if (broadcast && rng.uniform() < 0.5 && !sa.empty())
        sb[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(sa.size()) - 1))] = 1;
      auto a = detail::random_uniform<T>(sa, rng, lo, hi);
      auto b = detail::random_uniform<T>(sb, rng, lo, hi);
      uint64_t probe_seed = rng.next_u64() + 1;
      auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
        return detail::probe_scalar(op(in[0], in[1]), probe_seed);
      };
      double e0 = gradcheck_rel_error<T>(build, {a, b}, 0, eps);
      double e1 = gradcheck_rel_error<T>(build, {a, b}, 1, eps);
      return std::max(e0, e1);
    });
  };

  binary_case("add", [](auto& a, auto& b) { return add(a, b); }, -2, 2, true);
  binary_case("sub", [](auto& a, auto& b) { return sub(a, b); }, -2, 2, true);
  binary_case("mul", [](auto& a, auto& b) { return mul(a, b); }, -2, 2, true);
  binary_case("div", [](auto& a, auto& b) { return div(a, b); }, 0.4, 2.0, true);

  auto unary_case = [&](const std::string& name, auto&& op, double lo, double hi,
                        bool away_from_zero = false) {
    run_case(name, [&, lo, hi, away_from_zero](Rng& rng) {
      Shape s = detail::random_shape(rng);
      Tensor<T> x = away_from_zero ? detail::random_away_from_zero<T>(s, rng)
                                   : detail::random_uniform<T>(s, rng, lo, hi);
      uint64_t probe_seed = rng.next_u64() + 2;
      auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
        return detail::probe_scalar(op(in[0]), probe_seed);
      };
      return gradcheck_rel_error<T>(build, {x}, 0, eps);
    });
  };

  unary_case("neg", [](auto& x) { return neg(x); }, -2, 2);
  unary_case("abs", [](auto& x) { return abs(x); }, 0, 0, /*away_from_zero=*/true);
  unary_case("exp", [](auto& x) { return exp(x); }, -1.5, 1.5);
  unary_case("log", [](auto& x) { return log(x); }, 0.3, 3.0);
  unary_case("sqrt", [](auto& x) { return sqrt(x); }, 0.3, 3.0);
  unary_case("pow", [](auto& x) { return pow(x, T(2.5)); }, 0.3, 2.0);
  unary_case("relu", [](auto& x) { return relu(x); }, 0, 0, true);
  unary_case("leaky_relu", [](auto& x) { return leaky_relu(x, T(0.2)); }, 0, 0, true);
  unary_case("elu", [](auto& x) { return elu(x, T(1)); }, 0, 0, true);
  unary_case("tanh", [](auto& x) { return tanh(x); }, -2, 2);
  unary_case("sigmoid", [](auto& x) { return sigmoid(x); }, -3, 3);
  unary_case("reshape", [](auto& x) { return reshape(x, Shape{x.numel()}); }, -2, 2);

  run_case("sum_axes", [&](Rng& rng) {
    Shape s = detail::random_shape(rng, 3, 4);
    Tensor<T> x = detail::random_uniform<T>(s, rng, -2, 2);
    std::vector<int64_t> axes;
    for (int64_t d = 0; d < static_cast<int64_t>(s.size()); ++d)
      if (rng.uniform() < 0.5) axes.push_back(d);
    bool keep = rng.uniform() < 0.5;
    uint64_t probe_seed = rng.next_u64() + 3;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(sum(in[0], axes, keep), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("mean_axes", [&](Rng& rng) {
    Shape s = detail::random_shape(rng, 3, 4);
    Tensor<T> x = detail::random_uniform<T>(s, rng, -2, 2);
    std::vector<int64_t> axes = {static_cast<int64_t>(rng.uniform_int(0, static_cast<int64_t>(s.size()) - 1))};
    uint64_t probe_seed = rng.next_u64() + 4;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(mean(in[0], axes, false), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("broadcast_to", [&](Rng& rng) {
    Shape target = detail::random_shape(rng, 3, 4);
    Shape src = target;
    for (auto& e : src)
      if (rng.uniform() < 0.5) e = 1;
    Tensor<T> x = detail::random_uniform<T>(src, rng, -2, 2);
    uint64_t probe_seed = rng.next_u64() + 5;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(broadcast_to(in[0], target), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("transpose", [&](Rng& rng) {
    Shape s = {rng.uniform_int(1, 5), rng.uniform_int(1, 5)};
    Tensor<T> x = detail::random_uniform<T>(s, rng, -2, 2);
    uint64_t probe_seed = rng.next_u64() + 6;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(transpose(in[0]), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("matmul", [&](Rng& rng) {
    int64_t m = rng.uniform_int(1, 4), k = rng.uniform_int(1, 4), n = rng.uniform_int(1, 4);
    Tensor<T> a = detail::random_uniform<T>({m, k}, rng, -2, 2);
    Tensor<T> b = detail::random_uniform<T>({k, n}, rng, -2, 2);
    uint64_t probe_seed = rng.next_u64() + 7;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(matmul(in[0], in[1]), probe_seed);
    };
    return std::max(gradcheck_rel_error<T>(build, {a, b}, 0, eps),
                    gradcheck_rel_error<T>(build, {a, b}, 1, eps));
  });

  run_case("concat", [&](Rng& rng) {
    Shape s = detail::random_shape(rng, 3, 3);
    int64_t axis = rng.uniform_int(0, static_cast<int64_t>(s.size()) - 1);
    Tensor<T> a = detail::random_uniform<T>(s, rng, -2, 2);
    Shape s2 = s;
    s2[static_cast<size_t>(axis)] = rng.uniform_int(1, 3);
    Tensor<T> b = detail::random_uniform<T>(s2, rng, -2, 2);
    uint64_t probe_seed = rng.next_u64() + 8;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(concat<T>({in[0], in[1]}, axis), probe_seed);
    };
    return std::max(gradcheck_rel_error<T>(build, {a, b}, 0, eps),
                    gradcheck_rel_error<T>(build, {a, b}, 1, eps));
  });

  run_case("slice_embed", [&](Rng& rng) {
    Shape s = detail::random_shape(rng, 3, 5);
    std::vector<int64_t> starts, sizes;
    for (int64_t e : s) {
      int64_t sz = rng.uniform_int(1, e);
      starts.push_back(rng.uniform_int(0, e - sz));
      sizes.push_back(sz);
    }
    Tensor<T> x = detail::random_uniform<T>(s, rng, -2, 2);
    uint64_t probe_seed = rng.next_u64() + 9;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      Tensor<T> cut = slice(in[0], starts, sizes);
      return detail::probe_scalar(embed(cut, in[0].shape(), starts), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("conv2d", [&](Rng& rng) {
    int64_t batch = rng.uniform_int(1, 2), cin = rng.uniform_int(1, 3);
    int64_t cout = rng.uniform_int(1, 3), k = rng.uniform() < 0.5 ? 1 : 3;
    int64_t h = rng.uniform_int(5, 8), w = rng.uniform_int(5, 8);
    Conv2dAttrs attrs;
    attrs.stride_h = attrs.stride_w = rng.uniform_int(1, 2);
    attrs.pad_h = attrs.pad_w = rng.uniform_int(0, 2);
    attrs.dil_h = attrs.dil_w = k == 3 ? rng.uniform_int(1, 2) : 1;
    if (h + 2 * attrs.pad_h < attrs.dil_h * (k - 1) + 1) attrs.pad_h = attrs.pad_w = 2;
    Tensor<T> in = detail::random_uniform<T>({batch, cin, h, w}, rng, -1, 1);
    Tensor<T> weight = detail::random_uniform<T>({cout, cin, k, k}, rng, -1, 1);
    Tensor<T> bias = detail::random_uniform<T>({cout}, rng, -1, 1);
    uint64_t probe_seed = rng.next_u64() + 10;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& t) {
      return detail::probe_scalar(conv2d(t[0], t[1], t[2], attrs), probe_seed);
    };
    double e = gradcheck_rel_error<T>(build, {in, weight, bias}, 0, eps);
    e = std::max(e, gradcheck_rel_error<T>(build, {in, weight, bias}, 1, eps));
    e = std::max(e, gradcheck_rel_error<T>(build, {in, weight, bias}, 2, eps));
    return e;
  });

  run_case("upsample_nearest", [&](Rng& rng) {
    int64_t factor = rng.uniform_int(1, 3);
    Tensor<T> x = detail::random_uniform<T>(
        {1, rng.uniform_int(1, 2), rng.uniform_int(2, 4), rng.uniform_int(2, 4)}, rng, -2, 2);
    uint64_t probe_seed = rng.next_u64() + 11;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(upsample_nearest(in[0], factor), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("nearest_resize", [&](Rng& rng) {
    Tensor<T> x = detail::random_uniform<T>(
        {1, rng.uniform_int(1, 2), rng.uniform_int(2, 6), rng.uniform_int(2, 6)}, rng, -2, 2);
    int64_t oh = rng.uniform_int(1, 6), ow = rng.uniform_int(1, 6);
    uint64_t probe_seed = rng.next_u64() + 12;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(nearest_resize(in[0], oh, ow), probe_seed);
    };
    return gradcheck_rel_error<T>(build, {x}, 0, eps);
  });

  run_case("composite", [&](Rng& rng) {
    int64_t s = rng.uniform_int(3, 6);
    Tensor<T> raw = detail::random_uniform<T>({1, 3, s, s}, rng, -1, 1);
    Tensor<T> masked = detail::random_uniform<T>({1, 3, s, s}, rng, -1, 1);
    std::vector<T> mv(static_cast<size_t>(s * s));
    for (auto& v : mv) v = rng.uniform() < 0.5 ? T(0) : T(1);
    Tensor<T> mask = Tensor<T>::from({1, 1, s, s}, std::move(mv));
    uint64_t probe_seed = rng.next_u64() + 13;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(composite(in[0], in[1], mask), probe_seed);
    };
    return std::max(gradcheck_rel_error<T>(build, {raw, masked}, 0, eps),
                    gradcheck_rel_error<T>(build, {raw, masked}, 1, eps));
  });

  run_case("interpolate_samples", [&](Rng& rng) {
    int64_t batch = rng.uniform_int(1, 3), s = rng.uniform_int(2, 4);
    Tensor<T> a = detail::random_uniform<T>({batch, 2, s, s}, rng, -1, 1);
    Tensor<T> b = detail::random_uniform<T>({batch, 2, s, s}, rng, -1, 1);
    Tensor<T> t = detail::random_uniform<T>({batch}, rng, 0.05, 0.95);
    uint64_t probe_seed = rng.next_u64() + 14;
    auto build = [&, probe_seed](const std::vector<Tensor<T>>& in) {
      return detail::probe_scalar(interpolate_samples(in[0], in[1], t), probe_seed);
    };
    return std::max(gradcheck_rel_error<T>(build, {a, b}, 0, eps),
                    gradcheck_rel_error<T>(build, {a, b}, 1, eps));
  });

  return report;
}

// Double-backprop checks for the gradient penalty: the exact linear-critic
// case and a finite-difference comparison on a small smooth critic.
template <typename T>
GradCheckReport run_double_backprop_suite(uint64_t seed, double tol) {
  GradCheckReport report;

  {
    GradCheckCase c;
    c.name = "gradient_penalty_linear_critic";
    c.tol = 1e-9;
    Tensor<T> w = Tensor<T>::from({2, 1}, {T(3), T(4)}, true);
    auto critic = [&w](const Tensor<T>& x) { return reshape(matmul(x, w), {x.extent(0)}); };
    Rng rng = Rng::stream(seed, 0x11);
    Tensor<T> x = detail::random_uniform<T>({4, 2}, rng, -5, 5);
    x.set_requires_grad(true);
    Tensor<T> penalty = gradient_penalty<T>(critic, x, T(10));
    auto grads = grad(penalty, {w});
    double err = std::abs(static_cast<double>(penalty.item()) - 160.0);
    err = std::max(err, std::abs(static_cast<double>(grads[0].data()[0]) - 48.0));
    err = std::max(err, std::abs(static_cast<double>(grads[0].data()[1]) - 64.0));
    c.max_rel_err = err;
    c.ok = err <= c.tol;
    report.cases.push_back(c);
  }

  {
    GradCheckCase c;
    c.name = "gradient_penalty_conv_critic_fd";
    c.tol = tol;
    ParamStore<T> store;
    Rng init_rng = Rng::stream(seed, 0x12);
    std::vector<Layer<T>> layers = {
        {conv_spec(4, 2, 3, 2, 1, ActKind::kTanh), "conv1"},
        {conv_spec(2, 2, 3, 2, 1, ActKind::kTanh), "conv2"},
    };
    Layer<T> fc{fc_spec(8, 1), "fc"};
    for (const auto& l : layers) l.init(store, init_rng);
    fc.init(store, init_rng);

    auto critic_fwd = [&](const Tensor<T>& t) {
      Tensor<T> y = forward_chain(layers, store, t);
      y = reshape(y, {t.extent(0), 8});
      return reshape(fc.forward(store, y), {t.extent(0)});
    };
    Rng rng = Rng::stream(seed, 0x13);
    Tensor<T> x = detail::random_uniform<T>({2, 4, 8, 8}, rng, -1, 1);
    auto penalty_of = [&]() {
      Tensor<T> xh = x.detach();
      xh.set_requires_grad(true);
      return gradient_penalty<T>(critic_fwd, xh, T(10));
    };
    Tensor<T> pen = penalty_of();
    T eps = static_cast<T>(std::is_same_v<T, float> ? 1e-2 : 1e-5);
    for (const auto& name : store.names()) {
      if (name == "fc.bias") continue;  // exactly constant in the penalty
      Tensor<T> original = store.at(name);
      Tensor<T> fd = finite_difference_gradient(
          [&](const Tensor<T>& candidate) {
            store.replace(name, candidate);
            return penalty_of();
          },
          original.detach(), eps);
      store.replace(name, original);
      auto analytic = grad(pen, {original});
      for (int64_t i = 0; i < fd.numel(); ++i) {
        double a = static_cast<double>(analytic[0].data()[static_cast<size_t>(i)]);
        double n = static_cast<double>(fd.data()[static_cast<size_t>(i)]);
        c.max_rel_err =
            std::max(c.max_rel_err, std::abs(a - n) / std::max({1.0, std::abs(a), std::abs(n)}));
      }
    }
    c.ok = c.max_rel_err <= c.tol;
    report.cases.push_back(c);
  }

  return report;
}

namespace detail {
// Minimal permutation search, independent of the sorting implementation.
inline double emd_bruteforce_small(std::vector<double> a, std::vector<double> b) {
  std::vector<size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  double best = std::numeric_limits<double>::infinity();
  std::sort(perm.begin(), perm.end());
  do {
    double cost = 0;
    for (size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, cost / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}
}  // namespace detail

// Analytic and brute-force checks of the evaluation metrics.
inline GradCheckReport run_metric_oracle_suite(uint64_t seed) {
  GradCheckReport report;
  auto push = [&report](const std::string& name, double err, double tol) {
    report.cases.push_back({name, err, tol, err <= tol});
  };

  {
    std::vector<double> gt(100, 0.25), pred(100, 0.35);
    push("psnr_20db", std::abs(psnr(pred, gt, 1.0) - 20.0), 1e-9);
    push("psnr_cap", std::abs(psnr(gt, gt, 1.0) - 99.0), 0.0);
  }
  {
    Rng rng = Rng::stream(seed, 0x21);
    std::vector<double> img(16 * 16);
    for (auto& v : img) v = rng.uniform(0, 1);
    push("ssim_identity", std::abs(ssim(img, img, 1, 16, 16) - 1.0), 1e-9);
    std::vector<double> other(16 * 16);
    for (auto& v : other) v = rng.uniform(0, 1);
    push("ssim_symmetry", std::abs(ssim(img, other, 1, 16, 16) - ssim(other, img, 1, 16, 16)),
         1e-12);
  }
  {
    std::vector<double> gt(16, 2.0), pred(16, 4.0);
    DepthMetrics m = depth_metrics(pred, gt);
    double err = std::abs(m.abs_rel - 1.0);
    err = std::max(err, std::abs(m.sq_rel - 2.0));
    err = std::max(err, std::abs(m.rmse - 2.0));
    err = std::max(err, std::abs(m.rmse_log - std::log(2.0)));
    push("depth_metrics_analytic", err, 1e-9);
  }
  {
    Rng rng = Rng::stream(seed, 0x22);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
      size_t n = static_cast<size_t>(rng.uniform_int(1, 6));
      std::vector<double> a(n), b(n);
      for (auto& v : a) v = rng.uniform(-5, 5);
      for (auto& v : b) v = rng.uniform(-5, 5);
      worst = std::max(worst, std::abs(emd_1d(a, b) - detail::emd_bruteforce_small(a, b)));
    }
    push("emd_vs_bruteforce", worst, 1e-12);
  }
  return report;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_GRADCHECK_HPP_
