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

// Independent reference implementations used as test oracles. Everything here
// is written as plainly as possible (nested loops, no shared helpers with the
// library) so that agreement with the fast paths is meaningful.

#ifndef RGBDINPAINT_TESTS_ORACLES_HPP_
#define RGBDINPAINT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracles {

// Triple-loop matrix product, row-major.
template <typename T>
std::vector<T> matmul(const std::vector<T>& a, const std::vector<T>& b, int64_t m, int64_t k,
                      int64_t n) {
  std::vector<T> c(static_cast<size_t>(m * n), T(0));
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) {
      T acc = T(0);
      for (int64_t kk = 0; kk < k; ++kk) acc += a[i * k + kk] * b[kk * n + j];
      c[static_cast<size_t>(i * n + j)] = acc;
    }
  return c;
}

// Direct 2-D cross-correlation, NCHW, zero padding.
template <typename T>
std::vector<T> conv2d(const std::vector<T>& in, int64_t batch, int64_t c_in, int64_t h, int64_t w,
                      const std::vector<T>& weight, int64_t c_out, int64_t kh, int64_t kw,
                      const std::vector<T>& bias, int64_t sh, int64_t sw, int64_t ph, int64_t pw,
                      int64_t dh, int64_t dw, int64_t oh, int64_t ow) {
  std::vector<T> out(static_cast<size_t>(batch * c_out * oh * ow), T(0));
  for (int64_t b = 0; b < batch; ++b)
    for (int64_t f = 0; f < c_out; ++f)
      for (int64_t oy = 0; oy < oh; ++oy)
        for (int64_t ox = 0; ox < ow; ++ox) {
          T acc = bias.empty() ? T(0) : bias[static_cast<size_t>(f)];
          for (int64_t c = 0; c < c_in; ++c)
            for (int64_t ki = 0; ki < kh; ++ki)
              for (int64_t kj = 0; kj < kw; ++kj) {
                int64_t iy = oy * sh - ph + ki * dh;
                int64_t ix = ox * sw - pw + kj * dw;
                if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                acc += in[static_cast<size_t>(((b * c_in + c) * h + iy) * w + ix)] *
                       weight[static_cast<size_t>(((f * c_in + c) * kh + ki) * kw + kj)];
              }
          out[static_cast<size_t>(((b * c_out + f) * oh + oy) * ow + ox)] = acc;
        }
  return out;
}

// Earth-mover distance between equal-size 1-D multisets by brute force over
// all couplings (permutations of one side). Exponential; sizes <= 8 only.
inline double emd_1d_bruteforce(std::vector<double> a, std::vector<double> b) {
  std::vector<size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::sort(perm.begin(), perm.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0;
    for (size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, cost / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// One bias-corrected Adam step on a single scalar, kept deliberately verbose.
struct ScalarAdam {
  double m = 0, v = 0;
  int64_t t = 0;

  double step(double param, double grad, double lr, double beta1, double beta2, double eps) {
    t += 1;
    m = beta1 * m + (1 - beta1) * grad;
    v = beta2 * v + (1 - beta2) * grad * grad;
    double mhat = m / (1 - std::pow(beta1, static_cast<double>(t)));
    double vhat = v / (1 - std::pow(beta2, static_cast<double>(t)));
    return param - lr * mhat / (std::sqrt(vhat) + eps);
  }
};

// PSNR straight from the formula.
inline double psnr_direct(const std::vector<double>& pred, const std::vector<double>& gt,
                          double max_val) {
  double mse = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    double d = pred[i] - gt[i];
    mse += d * d;
  }
  mse /= static_cast<double>(pred.size());
  if (mse == 0) return 99.0;
  double v = 10.0 * std::log10(max_val * max_val / mse);
  return std::clamp(v, 0.0, 99.0);
}

// Single-channel SSIM with an 11x11 Gaussian window (sigma 1.5), valid
// positions only, straight from the definition with per-window loops.
inline double ssim_direct(const std::vector<double>& a, const std::vector<double>& b, int64_t h,
                          int64_t w) {
  constexpr int64_t kWin = 11;
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  double win[kWin * kWin];
  double norm = 0;
  for (int64_t i = 0; i < kWin; ++i)
    for (int64_t j = 0; j < kWin; ++j) {
      double dy = static_cast<double>(i - kWin / 2);
      double dx = static_cast<double>(j - kWin / 2);
      win[i * kWin + j] = std::exp(-(dy * dy + dx * dx) / (2 * kSigma * kSigma));
      norm += win[i * kWin + j];
    }
  for (double& v : win) v /= norm;

  double total = 0;
  int64_t count = 0;
  for (int64_t y = 0; y + kWin <= h; ++y)
    for (int64_t x = 0; x + kWin <= w; ++x) {
      double mu1 = 0, mu2 = 0;
      for (int64_t i = 0; i < kWin; ++i)
        for (int64_t j = 0; j < kWin; ++j) {
          double wt = win[i * kWin + j];
          mu1 += wt * a[(y + i) * w + (x + j)];
          mu2 += wt * b[(y + i) * w + (x + j)];
        }
      double s11 = 0, s22 = 0, s12 = 0;
      for (int64_t i = 0; i < kWin; ++i)
        for (int64_t j = 0; j < kWin; ++j) {
          double wt = win[i * kWin + j];
          double da = a[(y + i) * w + (x + j)] - mu1;
          double db = b[(y + i) * w + (x + j)] - mu2;
          s11 += wt * da * da;
          s22 += wt * db * db;
          s12 += wt * da * db;
        }
      double num = (2 * mu1 * mu2 + kC1) * (2 * s12 + kC2);
      double den = (mu1 * mu1 + mu2 * mu2 + kC1) * (s11 + s22 + kC2);
      total += num / den;
      ++count;
    }
  return total / static_cast<double>(count);
}

}  // namespace oracles

#endif  // RGBDINPAINT_TESTS_ORACLES_HPP_
