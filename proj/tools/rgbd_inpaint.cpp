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

// Command-line front end: dataset generation, training, inference,
// evaluation, fusion ablation, and gradient self-verification.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgbdinpaint/data.hpp"
#include "rgbdinpaint/gradcheck.hpp"
#include "rgbdinpaint/metrics.hpp"
#include "rgbdinpaint/train.hpp"
#include "rgbdinpaint/viz.hpp"

namespace ri = rgbdinpaint;
using nlohmann::json;

namespace {

// --seed omitted: fall back to RGBD_INPAINT_SEED, then 0.
uint64_t resolve_seed(const CLI::Option* opt, uint64_t flag_value) {
  if (opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("RGBD_INPAINT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ri::ConfigError("RGBD_INPAINT_SEED is not a valid integer: " + std::string(env));
    }
  }
  return 0;
}

void write_resolved_config(const std::string& out_dir, const json& config) {
  std::filesystem::create_directories(out_dir);
  std::ofstream f(out_dir + "/resolved_config.json");
  if (!f) throw ri::IoError("cannot write resolved config in " + out_dir);
  f << config.dump(2) << "\n";
}

int cmd_gen_data(const std::string& out, int64_t count, int64_t size, uint64_t seed) {
  json resolved = {{"command", "gen_data"}, {"out", out},   {"count", count},
                   {"size", size},          {"seed", seed}, {"d_max", ri::kDefaultDepthMax}};
  write_resolved_config(out, resolved);
  ri::DatasetIndex index = ri::generate_dataset(out, count, size, seed);
  std::printf("wrote %zu samples of size %lld to %s\n", index.ids.size(),
              static_cast<long long>(size), out.c_str());
  return 0;
}

int cmd_train(const std::string& data, const std::string& variant, int64_t iters, int64_t batch,
              double lr, int64_t size, uint64_t seed, const std::string& out) {
  ri::DatasetIndex index = ri::load_index(data);
  ri::TrainingSet<float> set = ri::load_training_set<float>(index);

  ri::TrainConfig cfg;
  cfg.gen.variant = ri::variant_from_name(variant);
  cfg.gen.image_size = size;
  cfg.batch_size = batch;
  cfg.learning_rate = lr;
  cfg.total_iters = iters;
  cfg.seed = seed;
  cfg.d_max = index.d_max;
  cfg.seed_models();

  json resolved = cfg.to_json();
  resolved["command"] = "train";
  resolved["data"] = data;
  resolved["out"] = out;
  write_resolved_config(out, resolved);

  ri::Trainer<float> trainer(cfg, std::move(set));
  ri::TrainResult<float> result = trainer.train(out);
  std::printf("trained %lld iterations (%lld critic / %lld generator updates)\n",
              static_cast<long long>(iters), static_cast<long long>(result.critic_updates),
              static_cast<long long>(result.generator_updates));
  std::printf("final checkpoint: %s\n", result.final_checkpoint.c_str());
  if (!result.log.empty()) {
    const auto& last = result.log.back();
    std::printf("final losses: l1_rgb=%s l1_depth=%s g_total=%s\n",
                ri::format_value(last.l1_rgb).c_str(), ri::format_value(last.l1_depth).c_str(),
                ri::format_value(last.g_total).c_str());
  }
  return 0;
}

int cmd_infer(const std::string& ckpt, const std::string& rgb_path, const std::string& depth_path,
              const std::string& mask_path, const std::string& out) {
  auto [cfg, generator] = ri::generator_from_checkpoint<float>(ckpt);
  int64_t s = cfg.gen.image_size;

  ri::PpmImage rgb_img = ri::read_ppm(rgb_path);
  ri::PgmImage depth_img = ri::read_pgm(depth_path);
  if (rgb_img.width != s || rgb_img.height != s || depth_img.width != s || depth_img.height != s)
    throw ri::ConfigError("input image size does not match checkpoint image size " +
                          std::to_string(s));
  if (depth_img.maxval != 65535)
    throw ri::IoError(depth_path + ": depth PGM must have maxval 65535");

  ri::RgbdSample sample;
  sample.size = s;
  sample.rgb.resize(static_cast<size_t>(3 * s * s));
  sample.depth.resize(static_cast<size_t>(s * s));
  for (int64_t y = 0; y < s; ++y)
    for (int64_t x = 0; x < s; ++x)
      for (int64_t k = 0; k < 3; ++k)
        sample.rgb[static_cast<size_t>((k * s + y) * s + x)] =
            rgb_img.pixels[static_cast<size_t>((y * s + x) * 3 + k)];
  for (size_t i = 0; i < sample.depth.size(); ++i)
    sample.depth[i] = static_cast<double>(depth_img.pixels[i]) * cfg.d_max / 65535.0;

  ri::ExternalMask<float> ext = ri::load_external_mask<float>(mask_path, s);
  auto [rgb_n, depth_n] = ri::normalize<float>(sample, cfg.d_max);

  json resolved = cfg.to_json();
  resolved["command"] = "infer";
  resolved["ckpt"] = ckpt;
  resolved["rgb"] = rgb_path;
  resolved["depth"] = depth_path;
  resolved["mask"] = mask_path;
  resolved["out"] = out;
  write_resolved_config(out, resolved);

  ri::Tensor<float> masked_rgb = ri::apply_mask(rgb_n, ext.mask);
  ri::Tensor<float> masked_depth = ri::apply_mask(depth_n, ext.mask);

  ri::Tensor<float> out_rgb, out_depth;
  {
    ri::NoGradGuard no_grad;
    ri::Tensor<float> rgb_b = ri::reshape(masked_rgb, {1, 3, s, s});
    ri::Tensor<float> depth_b = ri::reshape(masked_depth, {1, 1, s, s});
    ri::Tensor<float> mask_b = ri::reshape(ext.mask, {1, 1, s, s});
    auto [raw_rgb, raw_depth] = generator.forward(rgb_b, depth_b, mask_b);
    out_rgb = ri::reshape(ri::composite(raw_rgb, rgb_b, mask_b), {3, s, s});
    out_depth = ri::reshape(ri::composite(raw_depth, depth_b, mask_b), {1, s, s});
  }

  ri::RgbdSample result = ri::denormalize(out_rgb, out_depth, cfg.d_max);
  result.id = "inpainted";
  ri::write_sample(result, out, cfg.d_max);
  std::filesystem::rename(out + "/rgb/inpainted.ppm", out + "/inpainted.ppm");
  std::filesystem::rename(out + "/depth/inpainted.pgm", out + "/inpainted.pgm");
  std::filesystem::remove(out + "/rgb");
  std::filesystem::remove(out + "/depth");

  // side-by-side grid: input (holes white) | output | ground truth,
  // RGB row on top, colormapped depth row below
  ri::PpmImage grid = ri::compose_grid(
      {{ri::paint_holes_white(ri::render_rgb(masked_rgb), ext.mask), ri::render_rgb(out_rgb),
        ri::render_rgb(rgb_n)},
       {ri::paint_holes_white(ri::render_depth(masked_depth), ext.mask),
        ri::render_depth(out_depth), ri::render_depth(depth_n)}});
  ri::write_ppm(out + "/grid.ppm", grid.width, grid.height, grid.pixels);
  std::printf("wrote %s, %s, %s\n", (out + "/inpainted.ppm").c_str(),
              (out + "/inpainted.pgm").c_str(), (out + "/grid.ppm").c_str());
  return 0;
}

int cmd_eval(const std::string& ckpt, const std::string& data, uint64_t seed,
             const std::string& out) {
  auto [cfg, generator] = ri::generator_from_checkpoint<float>(ckpt);
  ri::DatasetIndex index = ri::load_index(data);
  ri::TrainingSet<float> set = ri::load_training_set<float>(index);
  if (set.image_size != cfg.gen.image_size)
    throw ri::ConfigError("dataset image size does not match checkpoint image size");

  json resolved = cfg.to_json();
  resolved["command"] = "eval";
  resolved["ckpt"] = ckpt;
  resolved["data"] = data;
  resolved["eval_seed"] = seed;
  resolved["out"] = out;
  write_resolved_config(out, resolved);

  ri::MetricsReport report = ri::evaluate<float>(
      [&generator](const ri::Tensor<float>& rgb, const ri::Tensor<float>& depth,
                   const ri::Tensor<float>& mask) { return generator.forward(rgb, depth, mask); },
      set, seed);

  std::ofstream csv(out + "/metrics.csv");
  csv << ri::metrics_csv(report);
  std::ofstream js(out + "/metrics.json");
  js << ri::metrics_json(report).dump(2) << "\n";
  std::printf("full-image means: rgb_l1=%s psnr=%s ssim=%s depth_rmse=%s\n",
              ri::format_value(report.mean_full.rgb_l1).c_str(),
              ri::format_value(report.mean_full.rgb_psnr).c_str(),
              ri::format_value(report.mean_full.rgb_ssim).c_str(),
              ri::format_value(report.mean_full.depth_rmse).c_str());
  return 0;
}

int cmd_ablate(const std::string& data, int64_t iters, uint64_t seed, const std::string& out) {
  ri::DatasetIndex index = ri::load_index(data);
  ri::TrainingSet<float> set = ri::load_training_set<float>(index);

  ri::TrainConfig base;
  base.gen.image_size = set.image_size;
  base.total_iters = iters;
  base.seed = seed;
  base.d_max = index.d_max;
  base.seed_models();

  json resolved = base.to_json();
  resolved["command"] = "ablate";
  resolved["data"] = data;
  resolved["out"] = out;
  write_resolved_config(out, resolved);

  ri::AblationResult result = ri::run_ablation<float>(set, base, out, seed);

  std::ofstream hashes(out + "/hashes.txt");
  for (const auto& row : result.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%s mask_hash=%016llx batch_hash=%016llx\n",
                  row.variant.c_str(), static_cast<unsigned long long>(row.mask_hash),
                  static_cast<unsigned long long>(row.batch_hash));
    hashes << line;
  }
  std::fputs(result.table.c_str(), stdout);
  std::printf("ablation table: %s\n", (out + "/ablation.csv").c_str());
  return 0;
}

int cmd_gradcheck(const std::string& dtype, double tol, bool tol_given) {
  if (dtype != "f32" && dtype != "f64")
    throw ri::ConfigError("--dtype must be f32 or f64");
  double effective_tol = tol_given ? tol : (dtype == "f64" ? 1e-4 : 1e-2);

  json resolved = {{"command", "gradcheck"}, {"dtype", dtype}, {"tol", effective_tol}};
  std::printf("%s\n", resolved.dump().c_str());

  ri::GradCheckReport all;
  auto append = [&all](const ri::GradCheckReport& r) {
    all.cases.insert(all.cases.end(), r.cases.begin(), r.cases.end());
  };
  if (dtype == "f64") {
    append(ri::run_gradient_suite<double>(2024, 20, effective_tol));
    append(ri::run_double_backprop_suite<double>(2024, std::max(effective_tol, 1e-3)));
  } else {
    append(ri::run_gradient_suite<float>(2024, 20, effective_tol));
    append(ri::run_double_backprop_suite<float>(2024, std::max(effective_tol, 5e-2)));
  }
  append(ri::run_metric_oracle_suite(2024));

  for (const auto& c : all.cases)
    std::printf("%-36s max_rel_err=%.3e tol=%.1e %s\n", c.name.c_str(), c.max_rel_err, c.tol,
                c.ok ? "PASS" : "FAIL");
  if (const ri::GradCheckCase* fail = all.first_failure()) {
    std::fprintf(stderr, "FIRST FAILURE: %s with max relative error %.6e (tol %.1e)\n",
                 fail->name.c_str(), fail->max_rel_err, fail->tol);
    return 1;
  }
  std::printf("all %zu checks passed\n", all.cases.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RGB-D inpainting with a late-fusion generator and WGAN-GP critics"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen_data", "generate a synthetic RGB-D dataset");
  std::string gen_out;
  int64_t gen_count = 8, gen_size = 64;
  uint64_t gen_seed = 0;
  gen->add_option("--out", gen_out, "dataset output directory")->required();
  gen->add_option("--count", gen_count, "number of scenes");
  gen->add_option("--size", gen_size, "square image size");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "random seed");

  auto* train = app.add_subcommand("train", "train an inpainting model");
  std::string train_data, train_variant = "late", train_out;
  int64_t train_iters = 200, train_batch = 32, train_size = 64;
  double train_lr = 0.001;
  uint64_t train_seed = 0;
  train->add_option("--data", train_data, "dataset root")->required();
  train->add_option("--variant", train_variant, "fusion variant: late|early|none")
      ->check(CLI::IsMember({"late", "early", "none"}));
  train->add_option("--iters", train_iters, "training iterations");
  train->add_option("--batch", train_batch, "batch size");
  train->add_option("--lr", train_lr, "learning rate");
  train->add_option("--size", train_size, "square image size");
  auto* train_seed_opt = train->add_option("--seed", train_seed, "random seed");
  train->add_option("--out", train_out, "output directory")->required();

  auto* infer = app.add_subcommand("infer", "inpaint one RGB-D image with a mask");
  std::string infer_ckpt, infer_rgb, infer_depth, infer_mask, infer_out;
  infer->add_option("--ckpt", infer_ckpt, "checkpoint path")->required();
  infer->add_option("--rgb", infer_rgb, "input RGB (PPM)")->required();
  infer->add_option("--depth", infer_depth, "input depth (16-bit PGM)")->required();
  infer->add_option("--mask", infer_mask, "mask (PGM, 255=known, 0=hole)")->required();
  infer->add_option("--out", infer_out, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  std::string eval_ckpt, eval_data, eval_out;
  uint64_t eval_seed = 0;
  eval->add_option("--ckpt", eval_ckpt, "checkpoint path")->required();
  eval->add_option("--data", eval_data, "dataset root")->required();
  auto* eval_seed_opt = eval->add_option("--seed", eval_seed, "mask sampling seed");
  eval->add_option("--out", eval_out, "output directory")->required();

  auto* ablate = app.add_subcommand("ablate", "train and compare all three fusion variants");
  std::string ablate_data, ablate_out;
  int64_t ablate_iters = 200;
  uint64_t ablate_seed = 0;
  ablate->add_option("--data", ablate_data, "dataset root")->required();
  ablate->add_option("--iters", ablate_iters, "training iterations per variant");
  auto* ablate_seed_opt = ablate->add_option("--seed", ablate_seed, "random seed");
  ablate->add_option("--out", ablate_out, "output directory")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "run gradient and metric self-verification");
  std::string gc_dtype = "f64";
  double gc_tol = 1e-4;
  gradcheck->add_option("--dtype", gc_dtype, "f32 or f64");
  auto* gc_tol_opt = gradcheck->add_option("--tol", gc_tol, "relative error tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_data(gen_out, gen_count, gen_size, resolve_seed(gen_seed_opt, gen_seed));
    if (train->parsed())
      return cmd_train(train_data, train_variant, train_iters, train_batch, train_lr, train_size,
                       resolve_seed(train_seed_opt, train_seed), train_out);
    if (infer->parsed())
      return cmd_infer(infer_ckpt, infer_rgb, infer_depth, infer_mask, infer_out);
    if (eval->parsed())
      return cmd_eval(eval_ckpt, eval_data, resolve_seed(eval_seed_opt, eval_seed), eval_out);
    if (ablate->parsed())
      return cmd_ablate(ablate_data, ablate_iters, resolve_seed(ablate_seed_opt, ablate_seed),
                        ablate_out);
    if (gradcheck->parsed()) return cmd_gradcheck(gc_dtype, gc_tol, gc_tol_opt->count() > 0);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
