// train/trainer.cpp

// Copyright 2026  tfgen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tfg/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "tfg/io/config_json.hpp"

namespace fs = std::filesystem;

namespace tfg::train {

void TrainConfig::validate() const {
  TFG_CHECK(stage1_epochs >= 0 && stage2_epochs >= 0, "epoch counts must be >= 0");
  TFG_CHECK(learning_rate > 0, "learning rate must be positive");
  TFG_CHECK(batch_size >= 1, "batch size must be >= 1");
  TFG_CHECK(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1, "bad ADAM betas");
  TFG_CHECK(lipread_pretrain_epochs >= 0, "pretrain epochs must be >= 0");
  weights.validate();
}

void to_json(nlohmann::json &j, const TrainConfig &c) {
  j = nlohmann::json{{"stage1_epochs", c.stage1_epochs},
                     {"stage2_epochs", c.stage2_epochs},
                     {"learning_rate", c.learning_rate},
                     {"beta1", c.beta1},
                     {"beta2", c.beta2},
                     {"batch_size", c.batch_size},
                     {"lambda_i", c.weights.lambda_i},
                     {"lambda_v", c.weights.lambda_v},
                     {"lambda_l", c.weights.lambda_l},
                     {"seed", c.seed},
                     {"scheme", model::to_string(c.scheme)},
                     {"checkpoint_every_epochs", c.checkpoint_every_epochs},
                     {"lipread_pretrain_epochs", c.lipread_pretrain_epochs},
                     {"lipread_lr", c.lipread_lr},
                     {"grad_clip_norm", c.grad_clip_norm},
                     {"disc_image_frames", c.disc_image_frames},
                     {"skip_disc_updates", c.skip_disc_updates},
                     {"cache_limit_mb", c.cache_limit_mb}};
}

void from_json(const nlohmann::json &j, TrainConfig &c) {
  c.stage1_epochs = j.value("stage1_epochs", c.stage1_epochs);
  c.stage2_epochs = j.value("stage2_epochs", c.stage2_epochs);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.weights.lambda_i = j.value("lambda_i", c.weights.lambda_i);
  c.weights.lambda_v = j.value("lambda_v", c.weights.lambda_v);
  c.weights.lambda_l = j.value("lambda_l", c.weights.lambda_l);
  c.seed = j.value("seed", c.seed);
  if (j.contains("scheme")) c.scheme = model::scheme_from_string(j.at("scheme").get<std::string>());
  c.checkpoint_every_epochs = j.value("checkpoint_every_epochs", c.checkpoint_every_epochs);
  c.lipread_pretrain_epochs = j.value("lipread_pretrain_epochs", c.lipread_pretrain_epochs);
  c.lipread_lr = j.value("lipread_lr", c.lipread_lr);
  c.grad_clip_norm = j.value("grad_clip_norm", c.grad_clip_norm);
  c.disc_image_frames = j.value("disc_image_frames", c.disc_image_frames);
  c.skip_disc_updates = j.value("skip_disc_updates", c.skip_disc_updates);
  c.cache_limit_mb = j.value("cache_limit_mb", c.cache_limit_mb);
}

// ---------------------------------------------------------------------------

namespace {

// evenly spaced frame subset for D_I (count = 0 selects every frame)
std::vector<int> frame_subset(int total, int count) {
  std::vector<int> out;
  if (count <= 0 || count >= total) {
    out.resize(size_t(total));
    for (int i = 0; i < total; ++i) out[size_t(i)] = i;
  } else {
    for (int j = 0; j < count; ++j) out.push_back(j * total / count);
  }
  return out;
}

FeatureVolume<float> clip_volume(const std::vector<Image> &frames, int start, int len) {
  std::vector<Image> slice(frames.begin() + start, frames.begin() + start + len);
  return stack_frames(slice);
}

}  // namespace

double pretrain_lipreader_on(model::LipReader<float> &net, const data::Corpus &corpus,
                             const std::vector<int> &train_idx,
                             const std::vector<int> &heldout_idx, int epochs, double lr,
                             int batch_size, uint64_t seed,
                             std::vector<double> *epoch_ce_out) {
  // materialize mouth volumes once; only crops and labels are needed here
  struct Item {
    FeatureVolume<float> vol;
    int label;
  };
  auto extract = [&](const std::vector<int> &idx) {
    std::vector<Item> items;
    for (int i : idx) {
      data::TalkingFaceSample s = corpus.load(i);
      if (!s.has_label) continue;
      auto mouth = model::crop_mouth(s.frames, s.has_landmarks ? &s.landmarks : nullptr,
                                     net.forward_crop_size());
      items.push_back(Item{stack_frames(mouth.crops), s.word_label});
    }
    return items;
  };
  std::vector<Item> train_items = extract(train_idx);
  TFG_CHECK(!train_items.empty(), "lip-reading pre-training needs labeled samples");
  std::vector<Item> heldout_items = extract(heldout_idx);

  nn::Adam<float> adam(lr, 0.5, 0.999);
  std::vector<nn::Param<float> *> params = net.params();
  Rng rng(derive_seed(seed, "lipread-pretrain"));

  std::vector<int> order(train_items.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  if (epoch_ce_out != nullptr) epoch_ce_out->clear();
  for (int e = 0; e < epochs; ++e) {
    rng.shuffle(order);
    double ce_sum = 0;
    for (size_t b = 0; b < order.size(); b += size_t(batch_size)) {
      const size_t be = std::min(order.size(), b + size_t(batch_size));
      nn::zero_grads(params);
      for (size_t i = b; i < be; ++i) {
        const Item &item = train_items[size_t(order[i])];
        Vecf logits = net.forward(item.vol, true);
        Vecf glogits;
        ce_sum += double(loss::cross_entropy_logits<float>(logits, item.label, &glogits));
        net.backward(glogits);
      }
      nn::scale_grads(params, 1.0 / double(be - b));
      nn::clip_grad_norm(params, 5.0);
      adam.step(params);
    }
    if (epoch_ce_out != nullptr) epoch_ce_out->push_back(ce_sum / double(order.size()));
  }

  if (heldout_items.empty()) return std::nan("");
  int correct = 0;
  for (const Item &item : heldout_items) {
    Vecf logits = net.forward(item.vol, false);
    Eigen::Index best;
    logits.maxCoeff(&best);
    if (int(best) == item.label) ++correct;
  }
  return double(correct) / double(heldout_items.size());
}

// ---------------------------------------------------------------------------

Trainer::Trainer(const model::ModelConfig &mcfg, const TrainConfig &tcfg,
                 const data::Corpus &corpus, std::string run_dir)
    : mcfg_(mcfg), tcfg_(tcfg), corpus_(corpus), run_dir_(std::move(run_dir)) {
  mcfg_.validate();
  tcfg_.validate();
  fs::create_directories(run_dir_);

  gen_ = std::make_unique<model::Generator<float>>(mcfg_, tcfg_.scheme,
                                                   derive_seed(tcfg_.seed, "init/gen"));
  Rng rng_di(derive_seed(tcfg_.seed, "init/d_i"));
  Rng rng_dv(derive_seed(tcfg_.seed, "init/d_v"));
  Rng rng_dl(derive_seed(tcfg_.seed, "init/d_l"));
  d_i_ = std::make_unique<model::DiscImage<float>>(mcfg_, rng_di);
  d_v_ = std::make_unique<model::DiscVideo<float>>(mcfg_, rng_dv);
  d_l_ = std::make_unique<model::LipReader<float>>(mcfg_, rng_dl);
  adam_g_ = std::make_unique<nn::Adam<float>>(tcfg_.learning_rate, tcfg_.beta1, tcfg_.beta2);
  adam_d_ = std::make_unique<nn::Adam<float>>(tcfg_.learning_rate, tcfg_.beta1, tcfg_.beta2);

  rng_data_.reseed(derive_seed(tcfg_.seed, "data-order"));
  rng_identity_.reseed(derive_seed(tcfg_.seed, "identity-pick"));
  rng_crop_.reseed(derive_seed(tcfg_.seed, "video-crop"));

  train_idx_ = corpus_.split_indices("train");
  test_idx_ = corpus_.split_indices("test");
  TFG_CHECK(!train_idx_.empty(), "corpus has no train split");
  cache_.resize(size_t(corpus_.size()));

  // per-coefficient z-score statistics over the training split
  std::vector<audio::MfccSequence> seqs;
  seqs.reserve(train_idx_.size());
  for (int i : train_idx_) seqs.push_back(clip(i).audio_features);
  norm_ = audio::compute_norm_stats(seqs);

  const std::string log_path = run_dir_ + "/log.csv";
  const bool fresh = !fs::exists(log_path);
  log_.open(log_path, std::ios::app);
  TFG_CHECK(log_.good(), "cannot open training log: ", log_path);
  if (fresh) {
    log_ << "stage,epoch,step,l_rec,l_I_g,l_V_g,l_l_g,total_g,l_I_d,l_V_d,l_l_d\n";
  }
}

data::TalkingFaceSample Trainer::clip(int corpus_index) {
  CachedClip &cc = cache_[size_t(corpus_index)];
  if (!cc.has_frames) {
    data::TalkingFaceSample s = corpus_.load(corpus_index);
    cc.mfcc = s.audio_features;
    cc.landmarks = s.landmarks;
    cc.has_landmarks = s.has_landmarks;
    cc.word_label = s.word_label;
    cc.has_label = s.has_label;
    cc.id = s.id;
    cc.fps = s.fps;
    cc.k = s.length();
    const int64_t bytes = int64_t(cc.k) * data::kFrameSize * data::kFrameSize * 3;
    if (cache_bytes_ + bytes <= tcfg_.cache_limit_mb * 1024 * 1024) {
      cc.frames_u8.reserve(size_t(bytes));
      for (const Image &f : s.frames) {
        std::vector<uint8_t> u8 = image_to_u8(f);
        cc.frames_u8.insert(cc.frames_u8.end(), u8.begin(), u8.end());
      }
      cc.has_frames = true;
      cache_bytes_ += bytes;
    } else {
      return s;  // over budget: hand back the fresh sample, cache only metadata
    }
  }
  data::TalkingFaceSample s;
  s.id = cc.id;
  s.fps = cc.fps;
  s.word_label = cc.word_label;
  s.has_label = cc.has_label;
  s.landmarks = cc.landmarks;
  s.has_landmarks = cc.has_landmarks;
  s.audio_features = cc.mfcc;
  const size_t frame_bytes = size_t(data::kFrameSize) * data::kFrameSize * 3;
  s.frames.reserve(size_t(cc.k));
  for (int t = 0; t < cc.k; ++t) {
    std::vector<uint8_t> one(cc.frames_u8.begin() + long(frame_bytes) * t,
                             cc.frames_u8.begin() + long(frame_bytes) * (t + 1));
    s.frames.push_back(image_from_u8(one, data::kFrameSize, data::kFrameSize));
  }
  s.identity = s.frames.front();
  return s;
}

std::vector<Matf> Trainer::normalized_windows(const data::TalkingFaceSample &s) const {
  TFG_CHECK(norm_.valid(), "normalization statistics not initialized");
  std::vector<Matf> out;
  out.reserve(s.audio_features.windows.size());
  for (const audio::MfccWindow &w : s.audio_features.windows) {
    out.push_back(norm_.apply(w.coeffs).cast<float>());
  }
  return out;
}

double Trainer::pretrain_lipreader() {
  const double acc =
      pretrain_lipreader_on(*d_l_, corpus_, train_idx_, test_idx_, tcfg_.lipread_pretrain_epochs,
                            tcfg_.lipread_lr, 8, derive_seed(tcfg_.seed, "lipread"));
  lipread_pretrained_ = true;
  return acc;
}

void Trainer::train_stage1() { run_stage(1); }
void Trainer::train_stage2() { run_stage(2); }

void Trainer::run_stage(int stage) {
  const int target = stage == 1 ? tcfg_.stage1_epochs : tcfg_.stage2_epochs;
  int &done = stage == 1 ? stage1_done_ : stage2_done_;
  auto &epoch_losses = stage == 1 ? stage1_epoch_losses_ : stage2_epoch_losses_;
  const auto &w = tcfg_.weights;
  const bool any_adv = w.lambda_i > 0 || w.lambda_v > 0 || w.lambda_l > 0;
  const bool use_disc = stage == 2 && !tcfg_.skip_disc_updates && any_adv;

  while (done < target) {
    std::vector<int> order = train_idx_;
    rng_data_.shuffle(order);

    double epoch_lrec = 0;
    int batches = 0;
    for (size_t b = 0; b < order.size(); b += size_t(tcfg_.batch_size)) {
      const size_t be = std::min(order.size(), b + size_t(tcfg_.batch_size));
      std::vector<int> batch(order.begin() + long(b), order.begin() + long(be));

      loss::LossReport report;
      if (use_disc) disc_batch(batch, &report);
      loss::LossReport gr = train_batch(batch, stage);
      report.l_rec = gr.l_rec;
      report.l_i_g = gr.l_i_g;
      report.l_v_g = gr.l_v_g;
      report.l_l_g = gr.l_l_g;
      report.total_g = gr.total_g;

      ++global_step_;
      write_log_row(stage, done, report);
      if (!report.finite()) {
        save_diagnostic(strcat_msg("non-finite loss at stage ", stage, " step ", global_step_));
        throw Error(strcat_msg("aborting: non-finite loss at step ", global_step_,
                               " (diagnostic checkpoint written)"));
      }
      epoch_lrec += report.l_rec;
      ++batches;
    }
    ++done;
    epoch_losses.push_back(epoch_lrec / std::max(1, batches));

    if (tcfg_.checkpoint_every_epochs > 0 && done % tcfg_.checkpoint_every_epochs == 0) {
      save_checkpoint_file(strcat_msg(run_dir_, "/ckpt_stage", stage, "_e", done, ".tfar"));
    }
  }
}

loss::LossReport Trainer::train_batch(const std::vector<int> &batch, int stage) {
  const auto &w = tcfg_.weights;
  std::vector<nn::Param<float> *> g_params = gen_->params();
  nn::zero_grads(g_params);

  loss::LossReport r;
  int labeled = 0;
  for (int idx : batch) {
    data::TalkingFaceSample sample = clip(idx);
    const uint64_t id_seed = rng_identity_.next_u64();
    const Image identity = data::select_identity(sample, data::IdentityMode::kRandom, id_seed);
    const std::vector<Matf> windows = normalized_windows(sample);
    const int K = sample.length();

    std::vector<Image> fake = gen_->generate(identity, windows, /*train=*/true);
    std::vector<Image> grads(fake.size());
    for (size_t t = 0; t < grads.size(); ++t) grads[t] = Image(3, fake[t].h, fake[t].w);

    r.l_rec += loss::recon_loss_backward(fake, sample.frames, 1.0, &grads);

    if (stage == 2) {
      if (w.lambda_i > 0) {
        const std::vector<int> sel = frame_subset(K, tcfg_.disc_image_frames);
        Vecf logits(Eigen::Index(sel.size()));
        for (size_t j = 0; j < sel.size(); ++j)
          logits(Eigen::Index(j)) = d_i_->forward(fake[size_t(sel[j])], true);
        Vecf glogits;
        r.l_i_g += double(loss::gan_gen_loss_logits<float>(logits, &glogits));
        for (size_t j = sel.size(); j-- > 0;) {
          Image fg = d_i_->backward(float(w.lambda_i) * glogits(Eigen::Index(j)));
          grads[size_t(sel[j])].v += fg.v;
        }
      }
      if (w.lambda_v > 0) {
        const int tv = mcfg_.video_clip_len;
        TFG_CHECK(K >= tv, "clip has ", K, " frames; video discriminator needs ", tv);
        const int start = int(rng_crop_.uniform_int(uint64_t(K - tv + 1)));
        FeatureVolume<float> vol = clip_volume(fake, start, tv);
        Vecf logit(1);
        logit(0) = d_v_->forward(vol, true);
        Vecf glogit;
        r.l_v_g += double(loss::gan_gen_loss_logits<float>(logit, &glogit));
        FeatureVolume<float> gvol = d_v_->backward(float(w.lambda_v) * glogit(0));
        const Eigen::Index hw = Eigen::Index(gvol.h) * gvol.w;
        for (int j = 0; j < tv; ++j) grads[size_t(start + j)].v += gvol.v.middleRows(j * hw, hw);
      }
      if (w.lambda_l > 0 && sample.has_label) {
        auto mouth = model::crop_mouth(fake, sample.has_landmarks ? &sample.landmarks : nullptr,
                                       mcfg_.mouth_crop);
        FeatureVolume<float> vol = stack_frames(mouth.crops);
        Vecf logits = d_l_->forward(vol, true);
        Vecf glogits;
        r.l_l_g += double(loss::lipread_gen_loss<float>(logits, sample.word_label, &glogits));
        FeatureVolume<float> gvol = d_l_->backward(float(w.lambda_l) * glogits);
        std::vector<Image> crop_grads(fake.size());
        const Eigen::Index hw = Eigen::Index(gvol.h) * gvol.w;
        for (int t = 0; t < K; ++t) {
          crop_grads[size_t(t)] = Image(3, gvol.h, gvol.w);
          crop_grads[size_t(t)].v = gvol.v.middleRows(t * hw, hw);
        }
        model::scatter_mouth_grads(mouth, crop_grads, &grads);
        ++labeled;
      }
    }
    gen_->backward(grads);
  }

  const double n = double(batch.size());
  nn::scale_grads(g_params, 1.0 / n);
  nn::clip_grad_norm(g_params, tcfg_.grad_clip_norm);
  adam_g_->step(g_params);

  if (stage == 2) {
    // generator-pass activity left gradients in the adversaries; drop them
    if (tcfg_.weights.lambda_i > 0) nn::zero_grads(d_i_->params());
    if (tcfg_.weights.lambda_v > 0) nn::zero_grads(d_v_->params());
    if (tcfg_.weights.lambda_l > 0) nn::zero_grads(d_l_->params());
  }

  r.l_rec /= n;
  r.l_i_g /= n;
  r.l_v_g /= n;
  r.l_l_g = labeled > 0 ? r.l_l_g / labeled : 0.0;
  r.total_g = loss::total_gen_loss(r.l_rec, r.l_i_g, r.l_v_g, r.l_l_g, w, labeled > 0);
  return r;
}

void Trainer::disc_batch(const std::vector<int> &batch, loss::LossReport *report) {
  const auto &w = tcfg_.weights;
  std::vector<nn::Param<float> *> d_params;
  if (w.lambda_i > 0)
    for (auto *p : d_i_->params()) d_params.push_back(p);
  if (w.lambda_v > 0)
    for (auto *p : d_v_->params()) d_params.push_back(p);
  if (w.lambda_l > 0)
    for (auto *p : d_l_->params()) d_params.push_back(p);
  if (d_params.empty()) return;
  nn::zero_grads(d_params);

  int labeled = 0;
  for (int idx : batch) {
    data::TalkingFaceSample sample = clip(idx);
    const uint64_t id_seed = rng_identity_.next_u64();
    const Image identity = data::select_identity(sample, data::IdentityMode::kRandom, id_seed);
    const std::vector<Matf> windows = normalized_windows(sample);
    const int K = sample.length();
    const std::vector<Image> fake = gen_->generate(identity, windows, /*train=*/false);

    if (w.lambda_i > 0) {
      const std::vector<int> sel = frame_subset(K, tcfg_.disc_image_frames);
      Vecf rl(Eigen::Index(sel.size())), fl(Eigen::Index(sel.size()));
      for (size_t j = 0; j < sel.size(); ++j)
        rl(Eigen::Index(j)) = d_i_->forward(sample.frames[size_t(sel[j])], true);
      for (size_t j = 0; j < sel.size(); ++j)
        fl(Eigen::Index(j)) = d_i_->forward(fake[size_t(sel[j])], true);
      Vecf grl, gfl;
      report->l_i_d += double(loss::gan_disc_loss_logits<float>(rl, fl, &grl, &gfl));
      for (size_t j = sel.size(); j-- > 0;) d_i_->backward(gfl(Eigen::Index(j)));
      for (size_t j = sel.size(); j-- > 0;) d_i_->backward(grl(Eigen::Index(j)));
    }
    if (w.lambda_v > 0) {
      const int tv = mcfg_.video_clip_len;
      TFG_CHECK(K >= tv, "clip has ", K, " frames; video discriminator needs ", tv);
      const int start_real = int(rng_crop_.uniform_int(uint64_t(K - tv + 1)));
      const int start_fake = int(rng_crop_.uniform_int(uint64_t(K - tv + 1)));
      Vecf rl(1), fl(1);
      rl(0) = d_v_->forward(clip_volume(sample.frames, start_real, tv), true);
      fl(0) = d_v_->forward(clip_volume(fake, start_fake, tv), true);
      Vecf grl, gfl;
      report->l_v_d += double(loss::gan_disc_loss_logits<float>(rl, fl, &grl, &gfl));
      d_v_->backward(gfl(0));
      d_v_->backward(grl(0));
    }
    if (w.lambda_l > 0 && sample.has_label) {
      const std::vector<Matd> *lm = sample.has_landmarks ? &sample.landmarks : nullptr;
      auto real_mouth = model::crop_mouth(sample.frames, lm, mcfg_.mouth_crop);
      auto fake_mouth = model::crop_mouth(fake, lm, mcfg_.mouth_crop);
      Vecf rl = d_l_->forward(stack_frames(real_mouth.crops), true);
      Vecf fl = d_l_->forward(stack_frames(fake_mouth.crops), true);
      Vecf grl, gfl;
      report->l_l_d +=
          double(loss::lipread_disc_loss<float>(rl, fl, sample.word_label, &grl, &gfl));
      d_l_->backward(gfl);
      d_l_->backward(grl);
      ++labeled;
    }
  }

  const double n = double(batch.size());
  nn::scale_grads(d_params, 1.0 / n);
  nn::clip_grad_norm(d_params, tcfg_.grad_clip_norm);
  adam_d_->step(d_params);

  report->l_i_d /= n;
  report->l_v_d /= n;
  report->l_l_d = labeled > 0 ? report->l_l_d / labeled : 0.0;
}

void Trainer::write_log_row(int stage, int epoch, const loss::LossReport &r) {
  log_ << stage << "," << epoch << "," << global_step_ << "," << r.l_rec << "," << r.l_i_g << ","
       << r.l_v_g << "," << r.l_l_g << "," << r.total_g << "," << r.l_i_d << "," << r.l_v_d << ","
       << r.l_l_d << "\n";
  log_.flush();
}

nlohmann::json Trainer::config_json() const {
  nlohmann::json j;
  j["model"] = mcfg_;
  j["train"] = tcfg_;
  j["mfcc"] = corpus_.mfcc_config();
  j["fps"] = corpus_.size() > 0 ? corpus_.info(0).fps : 25.0;
  if (corpus_.synthetic_config() != nullptr) {
    j["corpus_hash"] = hash_hex(corpus_.synthetic_config()->hash());
  }
  return j;
}

CheckpointMeta Trainer::make_meta() const {
  CheckpointMeta meta;
  meta.config = config_json();
  meta.progress = nlohmann::json{{"stage1_epochs_done", stage1_done_},
                                 {"stage2_epochs_done", stage2_done_},
                                 {"global_step", global_step_},
                                 {"lipread_pretrained", lipread_pretrained_},
                                 {"stage1_epoch_losses", stage1_epoch_losses_},
                                 {"stage2_epoch_losses", stage2_epoch_losses_}};
  meta.norm_stats = norm_;
  meta.rng_states["data-order"] = rng_data_.state();
  meta.rng_states["identity-pick"] = rng_identity_.state();
  meta.rng_states["video-crop"] = rng_crop_.state();
  return meta;
}

std::vector<nn::Param<float> *> Trainer::all_params() const {
  std::vector<nn::Param<float> *> out = gen_->params();
  for (auto *p : d_i_->params()) out.push_back(p);
  for (auto *p : d_v_->params()) out.push_back(p);
  for (auto *p : d_l_->params()) out.push_back(p);
  return out;
}

std::map<std::string, nn::Adam<float> *> Trainer::optimizer_map() const {
  return {{"g", adam_g_.get()}, {"d", adam_d_.get()}};
}

void Trainer::save_checkpoint_file(const std::string &path) {
  save_checkpoint(path, make_meta(), all_params(), optimizer_map());
}

std::string Trainer::save_final_checkpoint() {
  const std::string path = run_dir_ + "/checkpoint_final.tfar";
  save_checkpoint_file(path);
  return path;
}

void Trainer::save_diagnostic(const std::string &why) {
  try {
    CheckpointMeta meta = make_meta();
    meta.progress["diagnostic"] = why;
    save_checkpoint(run_dir_ + "/diagnostic.tfar", meta, all_params(), optimizer_map());
    std::cerr << "[trainer] diagnostic checkpoint written: " << why << "\n";
  } catch (const std::exception &e) {
    std::cerr << "[trainer] failed to write diagnostic checkpoint: " << e.what() << "\n";
  }
}

void Trainer::resume(const std::string &checkpoint_path, bool force) {
  auto opts = optimizer_map();
  CheckpointMeta meta = load_checkpoint(checkpoint_path, all_params(), opts);
  const uint64_t have = json_hash(meta.config), want = json_hash(config_json());
  if (have != want) {
    TFG_CHECK(force, "checkpoint config hash ", hash_hex(have),
              " does not match run config ", hash_hex(want), " (pass force to override)");
    std::cerr << "[trainer] warning: resuming across config mismatch\n";
  }
  stage1_done_ = meta.progress.value("stage1_epochs_done", 0);
  stage2_done_ = meta.progress.value("stage2_epochs_done", 0);
  global_step_ = meta.progress.value("global_step", int64_t(0));
  lipread_pretrained_ = meta.progress.value("lipread_pretrained", false);
  stage1_epoch_losses_ = meta.progress.value("stage1_epoch_losses", std::vector<double>{});
  stage2_epoch_losses_ = meta.progress.value("stage2_epoch_losses", std::vector<double>{});
  if (meta.norm_stats.valid()) norm_ = meta.norm_stats;
  if (meta.rng_states.count("data-order")) rng_data_.set_state(meta.rng_states["data-order"]);
  if (meta.rng_states.count("identity-pick"))
    rng_identity_.set_state(meta.rng_states["identity-pick"]);
  if (meta.rng_states.count("video-crop")) rng_crop_.set_state(meta.rng_states["video-crop"]);
}

}  // namespace tfg::train
