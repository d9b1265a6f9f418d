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
#include <vector>

#include "oracles.hpp"
#include "rgbdinpaint/metrics.hpp"

using rgbdinpaint::EvalRegion;
using rgbdinpaint::Rng;

namespace ri = rgbdinpaint;

namespace {

std::vector<double> random_values(size_t n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("l1 metric", "[metrics]") {
  Rng rng(1);
  std::vector<double> gt = random_values(64, rng);

  SECTION("zero on equality") {
    CHECK(ri::l1_metric(gt, gt, 1, {}, EvalRegion::kFull) == 0.0);
  }

  SECTION("constant offset") {
    std::vector<double> pred = gt;
    for (auto& v : pred) v += 0.5;
    CHECK(ri::l1_metric(pred, gt, 1, {}, EvalRegion::kFull) == Approx(0.5).epsilon(1e-12));
  }

  SECTION("hole-only region needs a mask and rejects empty regions") {
    std::vector<double> mask(64, 1.0);
    CHECK_THROWS_AS(ri::l1_metric(gt, gt, 1, mask, EvalRegion::kHoleOnly),
                    rgbdinpaint::DomainError);
    mask[3] = 0.0;
    std::vector<double> pred = gt;
    pred[3] += 2.0;
    pred[5] += 100.0;  // known pixel, must be ignored
    CHECK(ri::l1_metric(pred, gt, 1, mask, EvalRegion::kHoleOnly) == Approx(2.0));
  }
}

TEST_CASE("psnr", "[metrics]") {
  SECTION("MSE 0.01 at max 1 is exactly 20 dB") {
    std::vector<double> gt(100, 0.25), pred(100, 0.35);
    CHECK(ri::psnr(pred, gt, 1.0) == Approx(20.0).margin(1e-9));
  }

  SECTION("identical images cap at 99 dB") {
    std::vector<double> img(10, 0.5);
    CHECK(ri::psnr(img, img, 1.0) == 99.0);
  }

  SECTION("random pair matches the direct formula") {
    Rng rng(2);
    std::vector<double> a = random_values(256, rng), b = random_values(256, rng);
    CHECK(ri::psnr(a, b, 1.0) == Approx(oracles::psnr_direct(a, b, 1.0)).margin(1e-9));
  }

  SECTION("strictly decreasing in MSE below the cap") {
    std::vector<double> gt(64, 0.5);
    double prev = 1e9;
    for (double offset : {0.01, 0.02, 0.05, 0.1, 0.2, 0.4}) {
      std::vector<double> pred(64, 0.5 + offset);
      double v = ri::psnr(pred, gt, 1.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("ssim", "[metrics]") {
  Rng rng(3);

  SECTION("identical images give 1") {
    std::vector<double> img = random_values(16 * 16, rng);
    CHECK(ri::ssim(img, img, 1, 16, 16) == Approx(1.0).margin(1e-12));
  }

  SECTION("symmetry") {
    std::vector<double> a = random_values(16 * 16, rng), b = random_values(16 * 16, rng);
    CHECK(ri::ssim(a, b, 1, 16, 16) == Approx(ri::ssim(b, a, 1, 16, 16)).margin(1e-12));
  }

  SECTION("fixed 16x16 fixture matches the direct-formula oracle") {
    std::vector<double> a(16 * 16), b(16 * 16);
    for (int64_t y = 0; y < 16; ++y)
      for (int64_t x = 0; x < 16; ++x) {
        a[static_cast<size_t>(y * 16 + x)] = 0.5 + 0.4 * std::sin(0.3 * x + 0.2 * y);
        b[static_cast<size_t>(y * 16 + x)] = 0.5 + 0.4 * std::sin(0.3 * x + 0.2 * y + 0.5) * 0.9;
      }
    CHECK(ri::ssim(a, b, 1, 16, 16) ==
          Approx(oracles::ssim_direct(a, b, 16, 16)).margin(1e-6));
  }

  SECTION("channel averaging") {
    std::vector<double> a = random_values(2 * 12 * 12, rng), b = random_values(2 * 12 * 12, rng);
    std::vector<double> a0(a.begin(), a.begin() + 144), a1(a.begin() + 144, a.end());
    std::vector<double> b0(b.begin(), b.begin() + 144), b1(b.begin() + 144, b.end());
    double expect = 0.5 * (ri::ssim(a0, b0, 1, 12, 12) + ri::ssim(a1, b1, 1, 12, 12));
    CHECK(ri::ssim(a, b, 2, 12, 12) == Approx(expect).margin(1e-12));
  }

  SECTION("images smaller than the window are an error") {
    std::vector<double> tiny(8 * 8, 0.5);
    CHECK_THROWS_AS(ri::ssim(tiny, tiny, 1, 8, 8), rgbdinpaint::DomainError);
  }
}

TEST_CASE("depth metrics", "[metrics]") {
  SECTION("zero on equality") {
    std::vector<double> d(32, 3.0);
    auto m = ri::depth_metrics(d, d);
    CHECK(m.abs_rel == 0.0);
    CHECK(m.sq_rel == 0.0);
    CHECK(m.rmse == 0.0);
    CHECK(m.rmse_log == 0.0);
  }

  SECTION("analytic case gt=2, pred=4") {
    std::vector<double> gt(16, 2.0), pred(16, 4.0);
    auto m = ri::depth_metrics(pred, gt);
    CHECK(m.abs_rel == Approx(1.0).margin(1e-9));
    CHECK(m.sq_rel == Approx(2.0).margin(1e-9));
    CHECK(m.rmse == Approx(2.0).margin(1e-9));
    CHECK(m.rmse_log == Approx(std::log(2.0)).margin(1e-9));
  }

  SECTION("scale covariance") {
    Rng rng(4);
    std::vector<double> gt = random_values(64, rng, 1.0, 9.0);
    std::vector<double> pred = random_values(64, rng, 1.0, 9.0);
    auto base = ri::depth_metrics(pred, gt);
    double c = 2.5;
    std::vector<double> gt_c = gt, pred_c = pred;
    for (auto& v : gt_c) v *= c;
    for (auto& v : pred_c) v *= c;
    auto scaled = ri::depth_metrics(pred_c, gt_c);
    CHECK(scaled.abs_rel == Approx(base.abs_rel).epsilon(1e-12));
    CHECK(scaled.rmse_log == Approx(base.rmse_log).epsilon(1e-9));
    CHECK(scaled.rmse == Approx(c * base.rmse).epsilon(1e-12));
    CHECK(scaled.sq_rel == Approx(c * base.sq_rel).epsilon(1e-12));
  }

  SECTION("pixels with invalid ground truth are excluded") {
    std::vector<double> gt = {2.0, 0.0, 2.0, 1e-9};
    std::vector<double> pred = {4.0, 100.0, 4.0, 100.0};
    auto m = ri::depth_metrics(pred, gt, 1e-3);
    CHECK(m.abs_rel == Approx(1.0));
    std::vector<double> all_invalid = {0.0, 0.0};
    CHECK_THROWS_AS(ri::depth_metrics(pred, all_invalid, 1e-3), rgbdinpaint::ShapeError);
    std::vector<double> gt_zero = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(ri::depth_metrics(pred, gt_zero, 1e-3), rgbdinpaint::DomainError);
  }
}

TEST_CASE("emd_1d", "[metrics]") {
  SECTION("singletons") {
    CHECK(ri::emd_1d({0.0}, {3.5}) == Approx(3.5));
  }

  SECTION("identical multisets give zero") {
    CHECK(ri::emd_1d({1, 2, 3}, {3, 1, 2}) == 0.0);
  }

  SECTION("size mismatch rejected") {
    CHECK_THROWS_AS(ri::emd_1d({1, 2}, {1}), rgbdinpaint::ShapeError);
  }

  SECTION("matches permutation brute force for sizes up to 6") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      size_t n = static_cast<size_t>(rng.uniform_int(1, 6));
      std::vector<double> a = random_values(n, rng, -5, 5);
      std::vector<double> b = random_values(n, rng, -5, 5);
      double fast = ri::emd_1d(a, b);
      double brute = oracles::emd_1d_bruteforce(a, b);
      CHECK(fast == Approx(brute).margin(1e-12));
    }
  }

  SECTION("metric axioms on random multisets") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a = random_values(5, rng, -3, 3);
      std::vector<double> b = random_values(5, rng, -3, 3);
      std::vector<double> c = random_values(5, rng, -3, 3);
      double ab = ri::emd_1d(a, b), ba = ri::emd_1d(b, a);
      double ac = ri::emd_1d(a, c), cb = ri::emd_1d(c, b);
      CHECK(ab >= 0.0);
      CHECK(ab == Approx(ba).margin(1e-12));
      CHECK(ri::emd_1d(a, a) == 0.0);
      CHECK(ab <= ac + cb + 1e-12);
    }
  }
}

TEST_CASE("evaluate with an identity oracle model", "[metrics]") {
  auto set = ri::synthetic_training_set<double>(17, 3, 32);

  size_t call_index = 0;
  auto identity_model = [&](const rgbdinpaint::Tensor<double>&,
                            const rgbdinpaint::Tensor<double>&,
                            const rgbdinpaint::Tensor<double>&) {
    size_t i = call_index++;
    int64_t s = set.image_size;
    return std::pair(ri::reshape(set.rgb[i], {1, 3, s, s}),
                     ri::reshape(set.depth[i], {1, 1, s, s}));
  };

  ri::MetricsReport report = ri::evaluate<double>(identity_model, set, 5);

  SECTION("perfect metrics everywhere") {
    for (const auto& rows : {report.full, report.hole_only}) {
      for (const auto& m : rows) {
        CHECK(m.rgb_l1 == Approx(0.0).margin(1e-9));
        CHECK(m.rgb_psnr == 99.0);
        CHECK(m.rgb_ssim == Approx(1.0).margin(1e-9));
        CHECK(m.depth_l1 == Approx(0.0).margin(1e-12));
        CHECK(m.depth_rmse == Approx(0.0).margin(1e-12));
      }
    }
  }

  SECTION("means equal hand-averaged per-sample values") {
    call_index = 0;
    ri::MetricsReport rep = ri::evaluate<double>(identity_model, set, 5);
    double mean_ssim = 0;
    for (const auto& m : rep.full) mean_ssim += m.rgb_ssim;
    mean_ssim /= static_cast<double>(rep.full.size());
    CHECK(rep.mean_full.rgb_ssim == Approx(mean_ssim).margin(1e-12));
  }

  SECTION("deterministic under a fixed seed") {
    call_index = 0;
    ri::MetricsReport a = ri::evaluate<double>(identity_model, set, 5);
    call_index = 0;
    ri::MetricsReport b = ri::evaluate<double>(identity_model, set, 5);
    CHECK(ri::metrics_csv(a) == ri::metrics_csv(b));
  }

  SECTION("csv and json structure") {
    std::string csv = ri::metrics_csv(report);
    size_t rows = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows == 1 + 2 * set.count() + 2);  // header + per-sample x2 regions + 2 MEAN rows
    nlohmann::json j = ri::metrics_json(report);
    CHECK(j.contains("full"));
    CHECK(j.contains("hole_only"));
    CHECK(j["full"]["rgb_ssim"]["mean"].get<double>() == Approx(1.0).margin(1e-9));
    CHECK(j["full"]["rgb_l1"]["per_sample"].size() == set.count());
  }
}

TEST_CASE("evaluate rejects an empty dataset", "[metrics]") {
  rgbdinpaint::TrainingSet<double> empty;
  empty.image_size = 32;
  auto model = [](const rgbdinpaint::Tensor<double>& a, const rgbdinpaint::Tensor<double>& b,
                  const rgbdinpaint::Tensor<double>&) { return std::pair(a, b); };
  CHECK_THROWS_AS(ri::evaluate<double>(model, empty, 1), rgbdinpaint::ConfigError);
}
