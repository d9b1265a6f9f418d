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

#ifndef RGBDINPAINT_METRICS_HPP_
#define RGBDINPAINT_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgbdinpaint/common.hpp"
#include "rgbdinpaint/data.hpp"
#include "rgbdinpaint/models.hpp"
#include "rgbdinpaint/rng.hpp"

namespace rgbdinpaint {

enum class EvalRegion { kFull, kHoleOnly };

namespace detail {
// mask: h*w values, 1 = known, 0 = hole; empty span means full image.
inline bool pixel_selected(std::span<const double> mask, int64_t pixel, EvalRegion region) {
  if (region == EvalRegion::kFull) return true;
  return mask[static_cast<size_t>(pixel)] == 0.0;
}
}  // namespace detail

// Mean absolute error over the selected pixels of planar (C,H*W) images.
inline double l1_metric(std::span<const double> pred, std::span<const double> gt,
                        int64_t channels, std::span<const double> mask, EvalRegion region) {
  if (pred.size() != gt.size() || channels < 1 ||
      pred.size() % static_cast<size_t>(channels) != 0)
    throw ShapeError("l1_metric: shape mismatch");
  int64_t pixels = static_cast<int64_t>(pred.size()) / channels;
  if (region == EvalRegion::kHoleOnly && static_cast<int64_t>(mask.size()) != pixels)
    throw ShapeError("l1_metric: hole_only region requires a mask");
  double total = 0;
  int64_t count = 0;
  for (int64_t p = 0; p < pixels; ++p) {
    if (!detail::pixel_selected(mask, p, region)) continue;
    for (int64_t c = 0; c < channels; ++c)
      total += std::abs(pred[static_cast<size_t>(c * pixels + p)] -
                        gt[static_cast<size_t>(c * pixels + p)]);
    ++count;
  }
  if (count == 0) throw DomainError("l1_metric: empty evaluation region");
  return total / static_cast<double>(count * channels);
}

// 10*log10(max^2/MSE), clamped to [0, 99]; identical images hit the 99 cap.
inline double psnr(std::span<const double> pred, std::span<const double> gt, double max_val,
                   int64_t channels = 1, std::span<const double> mask = {},
                   EvalRegion region = EvalRegion::kFull) {
  if (pred.size() != gt.size() || pred.empty()) throw ShapeError("psnr: shape mismatch");
  if (max_val <= 0) throw DomainError("psnr: max_val must be positive");
  int64_t pixels = static_cast<int64_t>(pred.size()) / channels;
  if (region == EvalRegion::kHoleOnly && static_cast<int64_t>(mask.size()) != pixels)
    throw ShapeError("psnr: hole_only region requires a mask");
  double mse = 0;
  int64_t count = 0;
  for (int64_t p = 0; p < pixels; ++p) {
    if (!detail::pixel_selected(mask, p, region)) continue;
    for (int64_t c = 0; c < channels; ++c) {
      double d = pred[static_cast<size_t>(c * pixels + p)] -
                 gt[static_cast<size_t>(c * pixels + p)];
      mse += d * d;
    }
    ++count;
  }
  if (count == 0) throw DomainError("psnr: empty evaluation region");
  mse /= static_cast<double>(count * channels);
  if (mse == 0) return 99.0;
  return std::clamp(10.0 * std::log10(max_val * max_val / mse), 0.0, 99.0);
}

namespace detail {

inline const std::vector<double>& ssim_window() {
  static const std::vector<double> window = [] {
    constexpr int64_t kWin = 11;
    constexpr double kSigma = 1.5;
    std::vector<double> w(kWin);
    double total = 0;
    for (int64_t i = 0; i < kWin; ++i) {
      double d = static_cast<double>(i - kWin / 2);
      w[static_cast<size_t>(i)] = std::exp(-d * d / (2 * kSigma * kSigma));
      total += w[static_cast<size_t>(i)];
    }
    for (auto& v : w) v /= total;  // separable; 2-D kernel is the outer product
    return w;
  }();
  return window;
}

// Valid-region separable Gaussian filter: output is (h-10) x (w-10).
inline std::vector<double> gaussian_valid(std::span<const double> img, int64_t h, int64_t w) {
  const auto& win = ssim_window();
  const int64_t k = 11;
  int64_t ow = w - k + 1, oh = h - k + 1;
  std::vector<double> rows(static_cast<size_t>(h * ow));
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < ow; ++x) {
      double acc = 0;
      for (int64_t j = 0; j < k; ++j)
        acc += win[static_cast<size_t>(j)] * img[static_cast<size_t>(y * w + x + j)];
      rows[static_cast<size_t>(y * ow + x)] = acc;
    }
  std::vector<double> out(static_cast<size_t>(oh * ow));
  for (int64_t y = 0; y < oh; ++y)
    for (int64_t x = 0; x < ow; ++x) {
      double acc = 0;
      for (int64_t i = 0; i < k; ++i)
        acc += win[static_cast<size_t>(i)] * rows[static_cast<size_t>((y + i) * ow + x)];
      out[static_cast<size_t>(y * ow + x)] = acc;
    }
  return out;
}

// Local SSIM values at every valid window position of one channel.
inline std::vector<double> ssim_map(std::span<const double> a, std::span<const double> b,
                                    int64_t h, int64_t w) {
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  size_t n = static_cast<size_t>(h * w);
  std::vector<double> aa(n), bb(n), ab(n);
  for (size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  std::vector<double> mu1 = gaussian_valid(a, h, w);
  std::vector<double> mu2 = gaussian_valid(b, h, w);
  std::vector<double> s11 = gaussian_valid(aa, h, w);
  std::vector<double> s22 = gaussian_valid(bb, h, w);
  std::vector<double> s12 = gaussian_valid(ab, h, w);
  std::vector<double> map(mu1.size());
  for (size_t i = 0; i < map.size(); ++i) {
    double m1 = mu1[i], m2 = mu2[i];
    double v1 = s11[i] - m1 * m1;
    double v2 = s22[i] - m2 * m2;
    double cov = s12[i] - m1 * m2;
    map[i] = ((2 * m1 * m2 + kC1) * (2 * cov + kC2)) /
             ((m1 * m1 + m2 * m2 + kC1) * (v1 + v2 + kC2));
  }
  return map;
}

}  // namespace detail

// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2,
// C2 = 0.03^2, over valid window positions, per channel then averaged.
// Images are planar (C,H,W) in [0,1]. For the hole_only region the mean runs
// over window positions whose footprint intersects the hole.
inline double ssim(std::span<const double> pred, std::span<const double> gt, int64_t channels,
                   int64_t h, int64_t w, std::span<const double> mask = {},
                   EvalRegion region = EvalRegion::kFull) {
  if (pred.size() != gt.size() ||
      pred.size() != static_cast<size_t>(channels * h * w))
    throw ShapeError("ssim: shape mismatch");
  if (h < 11 || w < 11)
    throw DomainError("ssim: image smaller than the 11x11 window");
  if (region == EvalRegion::kHoleOnly && static_cast<int64_t>(mask.size()) != h * w)
    throw ShapeError("ssim: hole_only region requires a mask");

  int64_t oh = h - 10, ow = w - 10;
  std::vector<char> selected;
  int64_t n_selected = oh * ow;
  if (region == EvalRegion::kHoleOnly) {
    selected.assign(static_cast<size_t>(oh * ow), 0);
    n_selected = 0;
    for (int64_t y = 0; y < oh; ++y)
      for (int64_t x = 0; x < ow; ++x) {
        bool touches_hole = false;
        for (int64_t i = 0; i < 11 && !touches_hole; ++i)
          for (int64_t j = 0; j < 11 && !touches_hole; ++j)
            if (mask[static_cast<size_t>((y + i) * w + (x + j))] == 0.0) touches_hole = true;
        if (touches_hole) {
          selected[static_cast<size_t>(y * ow + x)] = 1;
          ++n_selected;
        }
      }
    if (n_selected == 0) throw DomainError("ssim: empty evaluation region");
  }

  double total = 0;
  for (int64_t c = 0; c < channels; ++c) {
    std::vector<double> map = detail::ssim_map(pred.subspan(static_cast<size_t>(c * h * w),
                                                            static_cast<size_t>(h * w)),
                                               gt.subspan(static_cast<size_t>(c * h * w),
                                                          static_cast<size_t>(h * w)),
                                               h, w);
    double ch_total = 0;
    for (size_t i = 0; i < map.size(); ++i)
      if (selected.empty() || selected[i]) ch_total += map[i];
    total += ch_total / static_cast<double>(n_selected);
  }
  return total / static_cast<double>(channels);
}

struct DepthMetrics {
  double abs_rel = 0;
  double sq_rel = 0;
  double rmse = 0;
  double rmse_log = 0;
};

// Depth-estimation battery in raw units. Pixels with gt <= eps are excluded;
// predictions are clamped to >= eps inside the log.
inline DepthMetrics depth_metrics(std::span<const double> pred, std::span<const double> gt,
                                  double eps = 1e-3, std::span<const double> mask = {},
                                  EvalRegion region = EvalRegion::kFull) {
  if (pred.size() != gt.size() || pred.empty()) throw ShapeError("depth_metrics: shape mismatch");
  if (region == EvalRegion::kHoleOnly && mask.size() != pred.size())
    throw ShapeError("depth_metrics: hole_only region requires a mask");
  DepthMetrics m;
  int64_t count = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (!detail::pixel_selected(mask, static_cast<int64_t>(i), region)) continue;
    if (gt[i] <= eps) continue;
    double p = pred[i], g = gt[i];
    double diff = p - g;
    m.abs_rel += std::abs(diff) / g;
    m.sq_rel += diff * diff / g;
    m.rmse += diff * diff;
    double lp = std::log(std::max(p, eps));
    double lg = std::log(g);
    m.rmse_log += (lp - lg) * (lp - lg);
    ++count;
  }
  if (count == 0) throw DomainError("depth_metrics: no valid pixels");
  double n = static_cast<double>(count);
  m.abs_rel /= n;
  m.sq_rel /= n;
  m.rmse = std::sqrt(m.rmse / n);
  m.rmse_log = std::sqrt(m.rmse_log / n);
  return m;
}

// Exact Wasserstein-1 distance between equal-size empirical distributions on
// the line: sort both sides and average the absolute differences.
inline double emd_1d(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size() || a.empty())
    throw ShapeError("emd_1d: multisets must be non-empty and equal-sized");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double total = 0;
  for (size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total / static_cast<double>(a.size());
}

// ---------------------------------------------------------------------------
// Whole-dataset evaluation
// ---------------------------------------------------------------------------

struct SampleMetrics {
  double rgb_l1 = 0, rgb_psnr = 0, rgb_ssim = 0;
  double depth_l1 = 0, depth_abs_rel = 0, depth_sq_rel = 0, depth_rmse = 0, depth_rmse_log = 0;
};

inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "rgb_l1",        "rgb_psnr",     "rgb_ssim",   "depth_l1",
      "depth_abs_rel", "depth_sq_rel", "depth_rmse", "depth_rmse_log"};
  return names;
}

inline double metric_by_index(const SampleMetrics& m, size_t i) {
  switch (i) {
    case 0: return m.rgb_l1;
    case 1: return m.rgb_psnr;
    case 2: return m.rgb_ssim;
    case 3: return m.depth_l1;
    case 4: return m.depth_abs_rel;
    case 5: return m.depth_sq_rel;
    case 6: return m.depth_rmse;
    case 7: return m.depth_rmse_log;
  }
  throw Error("metric index out of range");
}

struct MetricsReport {
  std::vector<std::string> ids;
  std::vector<SampleMetrics> full;
  std::vector<SampleMetrics> hole_only;
  SampleMetrics mean_full;
  SampleMetrics mean_hole_only;
  double depth_eps = 1e-3;
};

namespace detail {
inline SampleMetrics mean_of(const std::vector<SampleMetrics>& rows) {
  SampleMetrics mean;
  if (rows.empty()) return mean;
  double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    mean.rgb_l1 += r.rgb_l1 / n;
    mean.rgb_psnr += r.rgb_psnr / n;
    mean.rgb_ssim += r.rgb_ssim / n;
    mean.depth_l1 += r.depth_l1 / n;
    mean.depth_abs_rel += r.depth_abs_rel / n;
    mean.depth_sq_rel += r.depth_sq_rel / n;
    mean.depth_rmse += r.depth_rmse / n;
    mean.depth_rmse_log += r.depth_rmse_log / n;
  }
  return mean;
}
}  // namespace detail

// Per-sample evaluation: sample a seeded mask, run the model on the masked
// inputs, composite, denormalize, and score RGB in [0,1] scale and depth in
// raw units, over both the full image and the hole only.
// `infer` maps batch-1 tensors (masked_rgb, masked_depth, mask) -> (raw_rgb,
// raw_depth).
template <typename T, typename InferFn>
MetricsReport evaluate(const InferFn& infer, const TrainingSet<T>& set, uint64_t seed,
                       double depth_eps = 1e-3) {
  if (set.count() == 0) throw ConfigError("evaluate: empty dataset");
  MetricsReport report;
  report.depth_eps = depth_eps;
  int64_t s = set.image_size;

  for (size_t i = 0; i < set.count(); ++i) {
    Rng rng = Rng::stream(seed, 0xe7a1, i);
    auto [rect, mask] = sample_mask<T>(rng, s);
    Tensor<T> masked_rgb = apply_mask(set.rgb[i], mask);
    Tensor<T> masked_depth = apply_mask(set.depth[i], mask);

    Tensor<T> mask_b = reshape(mask, {1, 1, s, s});
    Tensor<T> rgb_b = reshape(masked_rgb, {1, 3, s, s});
    Tensor<T> depth_b = reshape(masked_depth, {1, 1, s, s});

    NoGradGuard no_grad;
    auto [raw_rgb, raw_depth] = infer(rgb_b, depth_b, mask_b);
    Tensor<T> out_rgb = reshape(composite(raw_rgb, rgb_b, mask_b), {3, s, s});
    Tensor<T> out_depth = reshape(composite(raw_depth, depth_b, mask_b), {1, s, s});

    RgbdSample pred = denormalize(out_rgb, out_depth, set.d_max);
    RgbdSample gt = denormalize(set.rgb[i], set.depth[i], set.d_max);

    std::vector<double> pred_rgb01(pred.rgb.size()), gt_rgb01(gt.rgb.size());
    for (size_t k = 0; k < pred.rgb.size(); ++k) pred_rgb01[k] = pred.rgb[k] / 255.0;
    for (size_t k = 0; k < gt.rgb.size(); ++k) gt_rgb01[k] = gt.rgb[k] / 255.0;
    std::vector<double> mask_px(static_cast<size_t>(s * s));
    for (size_t k = 0; k < mask_px.size(); ++k) mask_px[k] = static_cast<double>(mask.data()[k]);

    auto score = [&](EvalRegion region) {
      SampleMetrics m;
      m.rgb_l1 = l1_metric(pred_rgb01, gt_rgb01, 3, mask_px, region);
      m.rgb_psnr = psnr(pred_rgb01, gt_rgb01, 1.0, 3, mask_px, region);
      m.rgb_ssim = ssim(pred_rgb01, gt_rgb01, 3, s, s, mask_px, region);
      m.depth_l1 = l1_metric(pred.depth, gt.depth, 1, mask_px, region);
      DepthMetrics d = depth_metrics(pred.depth, gt.depth, depth_eps, mask_px, region);
      m.depth_abs_rel = d.abs_rel;
      m.depth_sq_rel = d.sq_rel;
      m.depth_rmse = d.rmse;
      m.depth_rmse_log = d.rmse_log;
      return m;
    };

    report.ids.push_back(set.ids[i]);
    report.full.push_back(score(EvalRegion::kFull));
    report.hole_only.push_back(score(EvalRegion::kHoleOnly));
  }

  report.mean_full = detail::mean_of(report.full);
  report.mean_hole_only = detail::mean_of(report.hole_only);
  return report;
}

inline std::string metrics_csv(const MetricsReport& report) {
  std::string out = "id,region";
  for (const auto& name : metric_names()) out += "," + name;
  out += "\n";
  auto emit = [&](const std::string& id, const char* region, const SampleMetrics& m) {
    out += id;
    out += ",";
    out += region;
    for (size_t i = 0; i < metric_names().size(); ++i)
      out += "," + format_value(metric_by_index(m, i));
    out += "\n";
  };
  for (size_t i = 0; i < report.ids.size(); ++i) {
    emit(report.ids[i], "full", report.full[i]);
    emit(report.ids[i], "hole_only", report.hole_only[i]);
  }
  emit("MEAN", "full", report.mean_full);
  emit("MEAN", "hole_only", report.mean_hole_only);
  return out;
}

inline nlohmann::json metrics_json(const MetricsReport& report) {
  nlohmann::json j;
  auto fill = [&](const char* region, const std::vector<SampleMetrics>& rows,
                  const SampleMetrics& mean) {
    for (size_t mi = 0; mi < metric_names().size(); ++mi) {
      nlohmann::json entry;
      for (size_t i = 0; i < rows.size(); ++i)
        entry["per_sample"][report.ids[i]] = metric_by_index(rows[i], mi);
      entry["mean"] = metric_by_index(mean, mi);
      j[region][metric_names()[mi]] = entry;
    }
  };
  fill("full", report.full, report.mean_full);
  fill("hole_only", report.hole_only, report.mean_hole_only);
  return j;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_METRICS_HPP_
