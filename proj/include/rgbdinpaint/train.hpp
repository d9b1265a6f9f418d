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

#ifndef RGBDINPAINT_TRAIN_HPP_
#define RGBDINPAINT_TRAIN_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rgbdinpaint/checkpoint.hpp"
#include "rgbdinpaint/data.hpp"
#include "rgbdinpaint/losses.hpp"
#include "rgbdinpaint/metrics.hpp"
#include "rgbdinpaint/models.hpp"
#include "rgbdinpaint/optim.hpp"

namespace rgbdinpaint {

// Every knob of the training procedure. The defaults are the training
// hyperparameters used throughout: batch 32, Adam(0.001, 0.9, 0.999, 1e-8),
// five critic updates per generator update, hole sides in [S/8, S/2],
// alpha=1, lambda_gp=10, beta_adv=0.001.
struct TrainConfig {
  GeneratorConfig gen;
  int64_t critic_channels = 16;
  int64_t batch_size = 32;
  double learning_rate = 0.001;
  int64_t critic_iters = 5;
  int64_t total_iters = 0;
  LossWeights weights;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  uint64_t seed = 0;
  int64_t checkpoint_every = 0;  // 0 = final checkpoint only
  int64_t content_only_warmup_iters = 0;
  double d_max = kDefaultDepthMax;

  int64_t local_patch_size() const { return gen.image_size / 2; }

  void validate() const {
    gen.validate();
    weights.validate();
    if (critic_iters < 1) throw ConfigError("critic_iters must be >= 1");
    if (learning_rate <= 0) throw ConfigError("learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (total_iters < 0 || checkpoint_every < 0 || content_only_warmup_iters < 0)
      throw ConfigError("iteration counts must be non-negative");
    if (critic_channels < 1) throw ConfigError("critic_channels must be >= 1");
    if (d_max <= 0) throw ConfigError("d_max must be positive");
  }

  AdamConfig adam() const {
    return AdamConfig{learning_rate, adam_beta1, adam_beta2, adam_epsilon};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["variant"] = variant_name(gen.variant);
    j["image_size"] = gen.image_size;
    j["base_channels"] = gen.base_channels;
    j["fusion_dilations"] = gen.fusion_dilations;
    j["critic_channels"] = critic_channels;
    j["batch_size"] = batch_size;
    j["learning_rate"] = learning_rate;
    j["critic_iters"] = critic_iters;
    j["total_iters"] = total_iters;
    j["alpha"] = weights.alpha;
    j["lambda_gp"] = weights.lambda_gp;
    j["beta_adv"] = weights.beta_adv;
    j["adam_beta1"] = adam_beta1;
    j["adam_beta2"] = adam_beta2;
    j["adam_epsilon"] = adam_epsilon;
    j["seed"] = seed;
    j["checkpoint_every"] = checkpoint_every;
    j["content_only_warmup_iters"] = content_only_warmup_iters;
    j["d_max"] = d_max;
    return j;
  }

  static TrainConfig from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    cfg.gen.variant = variant_from_name(j.at("variant").get<std::string>());
    cfg.gen.image_size = j.at("image_size").get<int64_t>();
    cfg.gen.base_channels = j.at("base_channels").get<int64_t>();
    auto dil = j.at("fusion_dilations").get<std::vector<int64_t>>();
    if (dil.size() != 4) throw ConfigError("fusion_dilations must have 4 entries");
    std::copy(dil.begin(), dil.end(), cfg.gen.fusion_dilations.begin());
    cfg.critic_channels = j.at("critic_channels").get<int64_t>();
    cfg.batch_size = j.at("batch_size").get<int64_t>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.critic_iters = j.at("critic_iters").get<int64_t>();
    cfg.total_iters = j.at("total_iters").get<int64_t>();
    cfg.weights.alpha = j.at("alpha").get<double>();
    cfg.weights.lambda_gp = j.at("lambda_gp").get<double>();
    cfg.weights.beta_adv = j.at("beta_adv").get<double>();
    cfg.adam_beta1 = j.at("adam_beta1").get<double>();
    cfg.adam_beta2 = j.at("adam_beta2").get<double>();
    cfg.adam_epsilon = j.at("adam_epsilon").get<double>();
    cfg.seed = j.at("seed").get<uint64_t>();
    cfg.checkpoint_every = j.at("checkpoint_every").get<int64_t>();
    cfg.content_only_warmup_iters = j.at("content_only_warmup_iters").get<int64_t>();
    cfg.d_max = j.at("d_max").get<double>();
    cfg.seed_models();
    cfg.validate();
    return cfg;
  }

  // The master seed drives model init and every sampling stream.
  void seed_models() { gen.seed = seed; }
};

template <typename T>
struct LossRow {
  int64_t iter = 0;
  T d_global_loss = 0, d_local_loss = 0;
  T gp_global = 0, gp_local = 0;
  T l1_rgb = 0, l1_depth = 0;
  T g_adv_global = 0, g_adv_local = 0;
  T g_total = 0;

  bool finite() const {
    for (T v : {d_global_loss, d_local_loss, gp_global, gp_local, l1_rgb, l1_depth, g_adv_global,
                g_adv_local, g_total})
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }
};

inline constexpr const char* kLossCsvHeader =
    "iter,d_global_loss,d_local_loss,gp_global,gp_local,l1_rgb,l1_depth,g_adv_global,"
    "g_adv_local,g_total";

template <typename T>
std::string loss_log_csv(const std::vector<LossRow<T>>& rows) {
  std::string out = kLossCsvHeader;
  out += "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iter);
    for (T v : {r.d_global_loss, r.d_local_loss, r.gp_global, r.gp_local, r.l1_rgb, r.l1_depth,
                r.g_adv_global, r.g_adv_local, r.g_total})
      out += "," + format_value(v);
    out += "\n";
  }
  return out;
}

template <typename T>
struct TrainResult {
  std::vector<LossRow<T>> log;
  std::string final_checkpoint;
  uint64_t mask_sequence_hash = 0;
  uint64_t batch_sequence_hash = 0;
  int64_t critic_updates = 0;
  int64_t generator_updates = 0;
};

// Alternating WGAN-GP training: per outer iteration, `critic_iters` critic
// updates on fresh batches/masks, then one generator update on a fresh
// batch. Every random draw is a pure function of (seed, iteration, phase,
// slot), which makes runs bit-reproducible and checkpoint resume exact.
template <typename T>
class Trainer {
 public:
  Trainer(TrainConfig config, TrainingSet<T> data)
      : cfg_(prepare(std::move(config), data)),
        data_(std::move(data)),
        generator_(cfg_.gen),
        critic_global_(CriticConfig{CriticScope::kGlobal, cfg_.gen.image_size,
                                    cfg_.critic_channels, cfg_.seed}),
        critic_local_(CriticConfig{CriticScope::kLocal, cfg_.local_patch_size(),
                                   cfg_.critic_channels, cfg_.seed}),
        opt_g_(generator_.params(), cfg_.adam()),
        opt_dg_(critic_global_.params(), cfg_.adam()),
        opt_dl_(critic_local_.params(), cfg_.adam()) {}

  const TrainConfig& config() const { return cfg_; }
  GeneratorModel<T>& generator() { return generator_; }
  CriticModel<T>& critic_global() { return critic_global_; }
  CriticModel<T>& critic_local() { return critic_local_; }
  int64_t iteration() const { return iter_; }
  int64_t critic_updates() const { return critic_updates_; }
  int64_t generator_updates() const { return generator_updates_; }

  struct Batch {
    Tensor<T> rgb, depth, mask;        // (B,3,S,S), (B,1,S,S), (B,1,S,S)
    Tensor<T> masked_rgb, masked_depth;
    std::vector<MaskRect> rects;
  };

  // Fresh batch + fresh masks for (iteration, phase); phase 0..critic_iters-1
  // are the critic inner steps, phase kGeneratorPhase the generator step.
  Batch make_batch(int64_t iteration, int64_t phase) {
    int64_t s = cfg_.gen.image_size;
    int64_t n = static_cast<int64_t>(data_.count());
    Rng pick = Rng::stream(cfg_.seed, static_cast<uint64_t>(iteration),
                           static_cast<uint64_t>(phase), 1);
    Batch batch;
    std::vector<Tensor<T>> rgb_rows, depth_rows, mask_rows;
    batch_hash_.update_u64(static_cast<uint64_t>(iteration));
    batch_hash_.update_u64(static_cast<uint64_t>(phase));
    mask_hash_.update_u64(static_cast<uint64_t>(iteration));
    mask_hash_.update_u64(static_cast<uint64_t>(phase));
    for (int64_t b = 0; b < cfg_.batch_size; ++b) {
      int64_t idx = pick.uniform_int(0, n - 1);
      batch_hash_.update_u64(static_cast<uint64_t>(idx));
      Rng mask_rng = Rng::stream(cfg_.seed, static_cast<uint64_t>(iteration),
                                 static_cast<uint64_t>(phase), 3000 + static_cast<uint64_t>(b));
      auto [rect, mask] = sample_mask<T>(mask_rng, s);
      mask_hash_.update_u64(static_cast<uint64_t>(rect.top));
      mask_hash_.update_u64(static_cast<uint64_t>(rect.left));
      mask_hash_.update_u64(static_cast<uint64_t>(rect.height));
      mask_hash_.update_u64(static_cast<uint64_t>(rect.width));
      rgb_rows.push_back(reshape(data_.rgb[static_cast<size_t>(idx)], {1, 3, s, s}));
      depth_rows.push_back(reshape(data_.depth[static_cast<size_t>(idx)], {1, 1, s, s}));
      mask_rows.push_back(reshape(mask, {1, 1, s, s}));
      batch.rects.push_back(rect);
    }
    batch.rgb = rgb_rows.size() == 1 ? rgb_rows[0] : concat(rgb_rows, 0);
    batch.depth = depth_rows.size() == 1 ? depth_rows[0] : concat(depth_rows, 0);
    batch.mask = mask_rows.size() == 1 ? mask_rows[0] : concat(mask_rows, 0);
    batch.masked_rgb = apply_mask(batch.rgb, batch.mask);
    batch.masked_depth = apply_mask(batch.depth, batch.mask);
    return batch;
  }

  struct CriticLosses {
    T d_global = 0, d_local = 0, gp_global = 0, gp_local = 0;
  };

  // One critic update: the generator runs frozen (no graph), both critics take
  // one Adam step on wasserstein + gradient-penalty losses.
  CriticLosses critic_step(int64_t iteration, int64_t inner) {
    Batch batch = make_batch(iteration, inner);

    Tensor<T> fake_rgb, fake_depth;
    {
      NoGradGuard frozen_generator;
      auto [raw_rgb, raw_depth] =
          generator_.forward(batch.masked_rgb, batch.masked_depth, batch.mask);
      fake_rgb = composite(raw_rgb, batch.masked_rgb, batch.mask);
      fake_depth = composite(raw_depth, batch.masked_depth, batch.mask);
    }

    Tensor<T> real = concat<T>({batch.rgb, batch.depth}, 1);
    Tensor<T> fake = concat<T>({fake_rgb, fake_depth}, 1);

    Rng t_rng = Rng::stream(cfg_.seed, static_cast<uint64_t>(iteration),
                            static_cast<uint64_t>(inner), 2);
    std::vector<T> t_vals(static_cast<size_t>(cfg_.batch_size));
    for (auto& v : t_vals) v = static_cast<T>(t_rng.uniform());
    Tensor<T> t = Tensor<T>::from({cfg_.batch_size}, std::move(t_vals));

    CriticLosses losses;
    losses.d_global = update_one_critic(critic_global_, opt_dg_, real, fake, t, losses.gp_global);

    int64_t p = cfg_.local_patch_size();
    Tensor<T> real_patches = extract_local_patches(real, batch.rects, p);
    Tensor<T> fake_patches = extract_local_patches(fake, batch.rects, p);
    losses.d_local =
        update_one_critic(critic_local_, opt_dl_, real_patches, fake_patches, t, losses.gp_local);

    ++critic_updates_;
    return losses;
  }

  struct GeneratorLosses {
    T l1_rgb = 0, l1_depth = 0, adv_global = 0, adv_local = 0, total = 0;
  };

  // One generator update; critics participate in the graph but only the
  // generator parameters are differentiated and stepped.
  GeneratorLosses generator_step(int64_t iteration, bool adversarial) {
    Batch batch = make_batch(iteration, kGeneratorPhase);
    auto [raw_rgb, raw_depth] =
        generator_.forward(batch.masked_rgb, batch.masked_depth, batch.mask);

    Tensor<T> l1_rgb = mean_all(abs(sub(raw_rgb, batch.rgb)));
    Tensor<T> l1_depth = mean_all(abs(sub(raw_depth, batch.depth)));
    Tensor<T> content =
        add(l1_rgb, mul(l1_depth, Tensor<T>::scalar(static_cast<T>(cfg_.weights.alpha))));

    GeneratorLosses losses;
    losses.l1_rgb = l1_rgb.item();
    losses.l1_depth = l1_depth.item();

    Tensor<T> total = content;
    if (adversarial && cfg_.weights.beta_adv > 0) {
      Tensor<T> fake_rgb = composite(raw_rgb, batch.masked_rgb, batch.mask);
      Tensor<T> fake_depth = composite(raw_depth, batch.masked_depth, batch.mask);
      Tensor<T> fake = concat<T>({fake_rgb, fake_depth}, 1);
      Tensor<T> adv_global = wgan_generator_loss(critic_global_.forward(fake));
      Tensor<T> fake_patches = extract_local_patches(fake, batch.rects, cfg_.local_patch_size());
      Tensor<T> adv_local = wgan_generator_loss(critic_local_.forward(fake_patches));
      losses.adv_global = adv_global.item();
      losses.adv_local = adv_local.item();
      total = generator_objective(content, adv_global, adv_local,
                                  static_cast<T>(cfg_.weights.beta_adv));
    }
    losses.total = total.item();

    auto grads = grad(total, generator_.params().tensors());
    opt_g_.step(generator_.params(), grads);
    ++generator_updates_;
    return losses;
  }

  // One outer iteration: critic_iters critic updates, then one generator
  // update. During warmup iterations the adversarial machinery is skipped
  // entirely and the generator trains on content loss alone.
  LossRow<T> step(int64_t iteration) {
    bool warmup = iteration <= cfg_.content_only_warmup_iters;
    LossRow<T> row;
    row.iter = iteration;
    if (!warmup) {
      CriticLosses last{};
      for (int64_t inner = 0; inner < cfg_.critic_iters; ++inner)
        last = critic_step(iteration, inner);
      row.d_global_loss = last.d_global;
      row.d_local_loss = last.d_local;
      row.gp_global = last.gp_global;
      row.gp_local = last.gp_local;
    }
    GeneratorLosses g = generator_step(iteration, !warmup);
    row.l1_rgb = g.l1_rgb;
    row.l1_depth = g.l1_depth;
    row.g_adv_global = g.adv_global;
    row.g_adv_local = g.adv_local;
    row.g_total = g.total;
    if (!row.finite())
      throw TrainingError("non-finite loss at iteration " + std::to_string(iteration));
    return row;
  }

  // Runs to cfg.total_iters, writing periodic checkpoints, a final
  // checkpoint, and the loss CSV when out_dir is non-empty.
  TrainResult<T> train(const std::string& out_dir = "") {
    namespace fs = std::filesystem;
    if (!out_dir.empty()) fs::create_directories(out_dir);

    for (int64_t i = iter_ + 1; i <= cfg_.total_iters; ++i) {
      LossRow<T> row = step(i);
      log_.push_back(row);
      iter_ = i;
      if (!out_dir.empty() && cfg_.checkpoint_every > 0 && i % cfg_.checkpoint_every == 0) {
        char name[64];
        std::snprintf(name, sizeof(name), "ckpt_%06lld.bin", static_cast<long long>(i));
        save_checkpoint(out_dir + "/" + name);
      }
    }

    TrainResult<T> result;
    result.log = log_;
    result.mask_sequence_hash = mask_hash_.digest();
    result.batch_sequence_hash = batch_hash_.digest();
    result.critic_updates = critic_updates_;
    result.generator_updates = generator_updates_;
    if (!out_dir.empty()) {
      result.final_checkpoint = out_dir + "/ckpt_final.bin";
      save_checkpoint(result.final_checkpoint);
      std::ofstream csv(out_dir + "/loss_log.csv");
      if (!csv) throw IoError("cannot write loss log in " + out_dir);
      csv << loss_log_csv(log_);
    }
    return result;
  }

  void save_checkpoint(const std::string& path) const {
    Checkpoint ck;
    ck.add_blob("__config", cfg_.to_json().dump());
    ck.add_u64("__iter", static_cast<uint64_t>(iter_));
    ck.add_u64("__rng", cfg_.seed);
    auto add_store = [&ck](const std::string& prefix, const ParamStore<T>& store) {
      for (const auto& [name, tensor] : store.all()) ck.add_tensor(prefix + name, tensor);
    };
    add_store("g.", generator_.params());
    add_store("d_global.", critic_global_.params());
    add_store("d_local.", critic_local_.params());
    auto add_opt = [&ck](const std::string& prefix, const Adam<T>& opt) {
      ck.add_u64(prefix + "t", static_cast<uint64_t>(opt.step_count()));
      for (const auto& [name, tensor] : opt.first_moments()) ck.add_tensor(prefix + "m." + name, tensor);
      for (const auto& [name, tensor] : opt.second_moments()) ck.add_tensor(prefix + "v." + name, tensor);
    };
    add_opt("adam_g.", opt_g_);
    add_opt("adam_dg.", opt_dg_);
    add_opt("adam_dl.", opt_dl_);
    ck.save(path);
  }

  // Restores parameters, optimizer state, and the iteration counter from a
  // checkpoint produced with an identical config.
  static Trainer from_checkpoint(const std::string& path, TrainingSet<T> data) {
    Checkpoint ck = Checkpoint::load(path);
    TrainConfig cfg = TrainConfig::from_json(nlohmann::json::parse(ck.blob("__config")));
    Trainer trainer(cfg, std::move(data));
    trainer.iter_ = static_cast<int64_t>(ck.u64("__iter"));
    auto load_store = [&ck](const std::string& prefix, ParamStore<T>& store) {
      for (const auto& name : store.names()) {
        Tensor<T> loaded = ck.template tensor<T>(prefix + name);
        loaded.set_requires_grad(true);
        store.replace(name, loaded);
      }
    };
    load_store("g.", trainer.generator_.params());
    load_store("d_global.", trainer.critic_global_.params());
    load_store("d_local.", trainer.critic_local_.params());
    auto load_opt = [&ck](const std::string& prefix, Adam<T>& opt) {
      opt.set_step_count(static_cast<int64_t>(ck.u64(prefix + "t")));
      for (auto& [name, tensor] : opt.first_moments())
        tensor = ck.template tensor<T>(prefix + "m." + name);
      for (auto& [name, tensor] : opt.second_moments())
        tensor = ck.template tensor<T>(prefix + "v." + name);
    };
    load_opt("adam_g.", trainer.opt_g_);
    load_opt("adam_dg.", trainer.opt_dg_);
    load_opt("adam_dl.", trainer.opt_dl_);
    return trainer;
  }

  static constexpr int64_t kGeneratorPhase = 100;

 private:
  static TrainConfig prepare(TrainConfig cfg, const TrainingSet<T>& data) {
    cfg.seed_models();
    cfg.validate();
    if (data.count() == 0) throw ConfigError("trainer: dataset is empty");
    if (data.image_size != cfg.gen.image_size)
      throw ConfigError("trainer: dataset image size " + std::to_string(data.image_size) +
                        " does not match config " + std::to_string(cfg.gen.image_size));
    return cfg;
  }

  // Shared update path for the global and local critics: wasserstein loss on
  // (real, fake) plus gradient penalty on per-sample interpolates.
  T update_one_critic(CriticModel<T>& critic, Adam<T>& opt, const Tensor<T>& real,
                      const Tensor<T>& fake, const Tensor<T>& t, T& gp_out) {
    Tensor<T> interp;
    {
      NoGradGuard no_grad;
      interp = interpolate_samples(real, fake, t);
    }
    Tensor<T> interp_leaf = interp.detach();
    interp_leaf.set_requires_grad(true);

    Tensor<T> d_real = critic.forward(real);
    Tensor<T> d_fake = critic.forward(fake);
    Tensor<T> w_loss = wgan_critic_loss(d_real, d_fake);
    Tensor<T> gp = gradient_penalty<T>([&critic](const Tensor<T>& x) { return critic.forward(x); },
                                       interp_leaf, static_cast<T>(cfg_.weights.lambda_gp));
    Tensor<T> total = add(w_loss, gp);
    auto grads = grad(total, critic.params().tensors());
    opt.step(critic.params(), grads);
    gp_out = gp.item();
    return w_loss.item();
  }

  TrainConfig cfg_;
  TrainingSet<T> data_;
  GeneratorModel<T> generator_;
  CriticModel<T> critic_global_;
  CriticModel<T> critic_local_;
  Adam<T> opt_g_, opt_dg_, opt_dl_;
  int64_t iter_ = 0;
  std::vector<LossRow<T>> log_;
  Fnv1a mask_hash_, batch_hash_;
  int64_t critic_updates_ = 0;
  int64_t generator_updates_ = 0;
};

// Loads just the generator (plus its config) from a checkpoint, for
// inference and evaluation.
template <typename T>
std::pair<TrainConfig, GeneratorModel<T>> generator_from_checkpoint(const std::string& path) {
  Checkpoint ck = Checkpoint::load(path);
  TrainConfig cfg = TrainConfig::from_json(nlohmann::json::parse(ck.blob("__config")));
  GeneratorModel<T> gen(cfg.gen);
  for (const auto& name : gen.params().names()) {
    Tensor<T> loaded = ck.template tensor<T>("g." + name);
    loaded.set_requires_grad(true);
    gen.params().replace(name, loaded);
  }
  return {cfg, std::move(gen)};
}

// ---------------------------------------------------------------------------
// Fusion-variant ablation
// ---------------------------------------------------------------------------

struct AblationRow {
  std::string variant;
  SampleMetrics metrics;  // full-image means
  uint64_t mask_hash = 0;
  uint64_t batch_hash = 0;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  std::string csv;
  std::string table;
};

inline std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "variant";
  for (const auto& name : metric_names()) out += "," + name;
  out += "\n";
  for (const auto& row : rows) {
    out += row.variant;
    for (size_t i = 0; i < metric_names().size(); ++i)
      out += "," + format_value(metric_by_index(row.metrics, i));
    out += "\n";
  }
  return out;
}

inline std::string ablation_table(const std::vector<AblationRow>& rows) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-8s %10s %10s %10s %10s %10s %10s %10s %10s\n", "variant",
                "rgb_l1", "rgb_psnr", "rgb_ssim", "d_l1", "abs_rel", "sq_rel", "rmse",
                "rmse_log");
  out += buf;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-8s %10.4g %10.4g %10.4g %10.4g %10.4g %10.4g %10.4g %10.4g\n",
                  row.variant.c_str(), row.metrics.rgb_l1, row.metrics.rgb_psnr,
                  row.metrics.rgb_ssim, row.metrics.depth_l1, row.metrics.depth_abs_rel,
                  row.metrics.depth_sq_rel, row.metrics.depth_rmse, row.metrics.depth_rmse_log);
    out += buf;
  }
  return out;
}

// Trains all three fusion variants with identical seeds and budgets,
// evaluates each on the same seeded masks, and emits one combined table.
// The mask/batch sequences are required to hash identically across variants.
template <typename T>
AblationResult run_ablation(const TrainingSet<T>& data, TrainConfig base,
                            const std::string& out_dir, uint64_t eval_seed) {
  namespace fs = std::filesystem;
  AblationResult result;
  for (FusionVariant variant :
       {FusionVariant::kLateFusion, FusionVariant::kEarlyFusion, FusionVariant::kNoFusion}) {
    TrainConfig cfg = base;
    cfg.gen.variant = variant;
    cfg.seed_models();
    Trainer<T> trainer(cfg, data);
    std::string variant_dir = out_dir.empty() ? "" : out_dir + "/" + variant_name(variant);
    TrainResult<T> train_result = trainer.train(variant_dir);

    auto& gen = trainer.generator();
    MetricsReport report = evaluate<T>(
        [&gen](const Tensor<T>& rgb, const Tensor<T>& depth, const Tensor<T>& mask) {
          return gen.forward(rgb, depth, mask);
        },
        data, eval_seed);

    AblationRow row;
    row.variant = variant_name(variant);
    row.metrics = report.mean_full;
    row.mask_hash = train_result.mask_sequence_hash;
    row.batch_hash = train_result.batch_sequence_hash;
    result.rows.push_back(row);
  }

  for (const auto& row : result.rows) {
    if (row.mask_hash != result.rows[0].mask_hash || row.batch_hash != result.rows[0].batch_hash)
      throw TrainingError("ablation variants consumed different mask/batch sequences");
  }

  result.csv = ablation_csv(result.rows);
  result.table = ablation_table(result.rows);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream csv(out_dir + "/ablation.csv");
    csv << result.csv;
    std::ofstream txt(out_dir + "/ablation.txt");
    txt << result.table;
  }
  return result;
}

}  // namespace rgbdinpaint

#endif  // RGBDINPAINT_TRAIN_HPP_
