// tests/acceptance/acceptance_main.cpp

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

// Gate suite. One line per criterion, nonzero exit when any gate fails.
// Full-scale reference numbers from large-corpus training are echoed as
// context only; the runnable gates below are the desk-scale substitutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "../oracles/gradcheck.hpp"
#include "../oracles/mfcc_oracle.hpp"
#include "tfg/eval/evaluate.hpp"
#include "tfg/io/png_io.hpp"
#include "tfg/io/wav.hpp"
#include "tfg/metrics/aperture.hpp"
#include "tfg/train/trainer.hpp"

using namespace tfg;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Gate {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};
std::vector<Gate> g_gates;

void run_gate(int id, const std::string &name, const std::function<bool(std::string *)> &fn) {
  const auto t0 = Clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = fn(&detail);
  } catch (const std::exception &e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double dt = secs_since(t0);
  g_gates.push_back(Gate{id, name, pass, detail, dt});
  std::printf("ACCEPTANCE %2d: %s — %s (%s) [%.1f s]\n", id, pass ? "PASS" : "FAIL",
              name.c_str(), detail.c_str(), dt);
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// shared fixtures

const char *kWorkDir = "/tmp/tfg_acceptance";

data::SyntheticAvatarConfig corpus_config() {
  data::SyntheticAvatarConfig cfg;
  cfg.vocabulary_size = 8;
  cfg.clip_frames = 12;
  cfg.fps = 25.0;
  cfg.train_clips = 96;
  cfg.test_clips = 48;
  cfg.rng_seed = 20260808;
  return cfg;
}

model::ModelConfig model_config(const data::Corpus &corpus) {
  model::ModelConfig m = model::ModelConfig::small();
  m.vocab = corpus.synthetic_config()->vocabulary_size;
  m.mfcc_rows = corpus.mfcc_config().sub_frames_per_window();
  m.mfcc_cols = corpus.mfcc_config().n_coeffs;
  return m;
}

train::TrainConfig base_train_config() {
  train::TrainConfig t;
  t.stage1_epochs = 10;
  t.stage2_epochs = 5;
  t.batch_size = 4;
  t.learning_rate = 5e-4;
  t.seed = 97531;
  t.disc_image_frames = 6;
  t.lipread_pretrain_epochs = 25;
  t.lipread_lr = 1e-3;
  return t;
}

struct TrainedRun {
  std::unique_ptr<train::Trainer> trainer;
  double wall_seconds = 0;
};

TrainedRun train_run(const model::ModelConfig &mcfg, const train::TrainConfig &tcfg,
                     const data::Corpus &corpus, const std::string &dir, bool pretrain_lip) {
  const auto t0 = Clock::now();
  TrainedRun run;
  run.trainer = std::make_unique<train::Trainer>(mcfg, tcfg, corpus, dir);
  if (pretrain_lip) run.trainer->pretrain_lipreader();
  run.trainer->train_stage1();
  run.trainer->train_stage2();
  run.wall_seconds = secs_since(t0);
  return run;
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  fs::remove_all(kWorkDir);
  fs::create_directories(kWorkDir);
  const std::string work(kWorkDir);

  // -------------------------------------------------------------------------
  // criterion 1: full-scale reference values are context, not gates
  run_gate(1, "full-scale reference values recorded, not reproduced", [&](std::string *d) {
    // large-corpus reference results for the reconstruction-only variant and
    // the full loss (top1/top5); desk-scale gates below substitute for them
    constexpr double kRefPsnr = 27.77, kRefSsim = 0.924, kRefLmd = 3.01;
    constexpr double kRefTop1 = 0.362, kRefTop5 = 0.630;
    *d = strcat_msg("PSNR ", kRefPsnr, " / SSIM ", kRefSsim, " / LMD ", kRefLmd, " / LRA ",
                    kRefTop1, "/", kRefTop5, " require LRW-scale training; recorded only");
    return true;
  });

  // -------------------------------------------------------------------------
  // criterion 2: MFCC implementation vs brute-force spectral oracle
  run_gate(2, "MFCC equals DFT->mel->log->DCT oracle within 1e-6", [&](std::string *d) {
    const auto t0 = Clock::now();
    audio::MfccConfig cfg;
    Rng rng(321);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
      audio::Waveform w;
      w.sample_rate_hz = 16000;
      w.samples.resize(5600);
      // mix of random tones and noise keeps every mel band active
      const double f1 = rng.uniform(80.0, 7600.0), f2 = rng.uniform(80.0, 7600.0);
      for (size_t i = 0; i < w.samples.size(); ++i) {
        const double tau = double(i) / 16000.0;
        w.samples[i] = float(0.3 * std::sin(2 * 3.14159265358979 * f1 * tau) +
                             0.2 * std::sin(2 * 3.14159265358979 * f2 * tau) +
                             0.1 * rng.uniform(-1.0, 1.0));
      }
      const audio::MfccWindow win =
          audio::compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
      const Matd oracle = testing::mfcc_oracle(std::span<const float>(w.samples), cfg);
      for (Eigen::Index i = 0; i < win.coeffs.rows(); ++i)
        for (Eigen::Index j = 0; j < win.coeffs.cols(); ++j) {
          const double denom =
              std::max({std::abs(win.coeffs(i, j)), std::abs(oracle(i, j)), 1e-9});
          worst = std::max(worst, std::abs(win.coeffs(i, j) - oracle(i, j)) / denom);
        }
    }
    const double dt = secs_since(t0);
    *d = strcat_msg("worst rel err ", worst, " over 50 windows, ", dt, " s");
    return worst < 1e-6 && dt < 10.0;
  });

  // -------------------------------------------------------------------------
  // criterion 3: analytic gradients vs central differences on toy instances
  run_gate(3, "analytic gradients match finite differences (>=95%)", [&](std::string *d) {
    const auto t0 = Clock::now();
    Rng rng(888);
    const model::ModelConfig toy = model::ModelConfig::toy();
    int checked = 0, passed = 0;
    double worst = 0;
    auto absorb = [&](const testing::GradCheckResult &r) {
      checked += r.checked;
      passed += r.passed;
      worst = std::max(worst, r.worst_rel);
    };

    auto rand_map = [&](int c, int h, int w) {
      FeatureMap<double> m(c, h, w);
      for (Eigen::Index i = 0; i < m.v.size(); ++i) m.v.data()[i] = rng.uniform(-0.6, 0.6);
      return m;
    };
    auto rand_vol = [&](int c, int t, int h, int w) {
      FeatureVolume<double> v(c, t, h, w);
      for (Eigen::Index i = 0; i < v.v.size(); ++i) v.v.data()[i] = rng.uniform(-0.6, 0.6);
      return v;
    };

    // L_rec through the full generator (audio encoder, image encoder,
    // recurrent unit and decoder all receive gradient on this path)
    {
      model::Generator<double> gen(toy, model::GenerationScheme::kRecurrent, 5);
      const int K = 3;
      FeatureMap<double> identity = rand_map(3, toy.image_size, toy.image_size);
      std::vector<Mat<double>> windows;
      for (int t = 0; t < K; ++t) {
        Mat<double> w(toy.mfcc_rows, toy.mfcc_cols);
        for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-1, 1);
        windows.push_back(w);
      }
      std::vector<FeatureMap<double>> truth;
      for (int t = 0; t < K; ++t) truth.push_back(rand_map(3, toy.image_size, toy.image_size));
      auto loss = [&]() {
        return loss::recon_loss(gen.generate(identity, windows, false), truth);
      };
      auto params = gen.params();
      nn::zero_grads(params);
      auto fake = gen.generate(identity, windows, true);
      std::vector<FeatureMap<double>> grads(fake.size());
      for (size_t t = 0; t < grads.size(); ++t)
        grads[t] = FeatureMap<double>(3, toy.image_size, toy.image_size);
      loss::recon_loss_backward(fake, truth, 1.0, &grads);
      gen.backward(grads);
      absorb(testing::check_param_grads(params, loss, rng, 6));
    }

    // GAN losses through D_I and D_V
    {
      Rng drng(12);
      model::DiscImage<double> d_i(toy, drng);
      FeatureMap<double> real = rand_map(3, toy.image_size, toy.image_size);
      FeatureMap<double> fake = rand_map(3, toy.image_size, toy.image_size);
      auto loss = [&]() {
        Vec<double> rl(1), fl(1);
        rl(0) = d_i.forward(real, false);
        fl(0) = d_i.forward(fake, false);
        return loss::gan_disc_loss_logits<double>(rl, fl, nullptr, nullptr);
      };
      std::vector<nn::Param<double> *> params;
      d_i.visit([&](nn::Param<double> &p) { params.push_back(&p); });
      nn::zero_grads(params);
      Vec<double> rl(1), fl(1), grl, gfl;
      rl(0) = d_i.forward(real, true);
      fl(0) = d_i.forward(fake, true);
      loss::gan_disc_loss_logits<double>(rl, fl, &grl, &gfl);
      d_i.backward(gfl(0));
      d_i.backward(grl(0));
      absorb(testing::check_param_grads(params, loss, rng, 8));
    }
    {
      Rng drng(13);
      model::DiscVideo<double> d_v(toy, drng);
      FeatureVolume<double> clip = rand_vol(3, toy.video_clip_len, toy.image_size, toy.image_size);
      auto loss = [&]() {
        Vec<double> l(1);
        l(0) = d_v.forward(clip, false);
        return loss::gan_gen_loss_logits<double>(l, nullptr);
      };
      std::vector<nn::Param<double> *> params;
      d_v.visit([&](nn::Param<double> &p) { params.push_back(&p); });
      nn::zero_grads(params);
      Vec<double> l(1), gl;
      l(0) = d_v.forward(clip, true);
      loss::gan_gen_loss_logits<double>(l, &gl);
      d_v.backward(gl(0));
      absorb(testing::check_param_grads(params, loss, rng, 8));
    }

    // lip-reading losses through D_l
    {
      Rng drng(14);
      model::LipReader<double> d_l(toy, drng);
      FeatureVolume<double> real = rand_vol(3, 5, toy.mouth_crop, toy.mouth_crop);
      FeatureVolume<double> fake = rand_vol(3, 5, toy.mouth_crop, toy.mouth_crop);
      auto loss = [&]() {
        const Vec<double> rl = d_l.forward(real, false);
        const Vec<double> fl = d_l.forward(fake, false);
        return loss::lipread_disc_loss<double>(rl, fl, 1, nullptr, nullptr) +
               loss::lipread_gen_loss<double>(fl, 1, nullptr);
      };
      std::vector<nn::Param<double> *> params;
      d_l.visit([&](nn::Param<double> &p) { params.push_back(&p); });
      nn::zero_grads(params);
      const Vec<double> rl = d_l.forward(real, true);
      const Vec<double> fl = d_l.forward(fake, true);
      Vec<double> grl, gfl, gfl2;
      loss::lipread_disc_loss<double>(rl, fl, 1, &grl, &gfl);
      loss::lipread_gen_loss<double>(fl, 1, &gfl2);
      d_l.backward(gfl + gfl2);
      d_l.backward(grl);
      absorb(testing::check_param_grads(params, loss, rng, 8));
    }

    const double frac = checked ? double(passed) / checked : 0.0;
    const double dt = secs_since(t0);
    *d = strcat_msg(passed, "/", checked, " coords (", 100.0 * frac, "%), worst rel ", worst,
                    ", ", dt, " s");
    return frac >= 0.95 && dt < 120.0;
  });

  // -------------------------------------------------------------------------
  // criterion 4: loss identities
  run_gate(4, "loss identities at analytic points", [&](std::string *d) {
    Vecd half(1);
    half(0) = 0.5;
    const double e1 = std::abs(loss::gan_disc_loss(half, half) - 2.0 * std::log(2.0));
    const double e2 = std::abs(loss::gan_gen_loss(half) - std::log(2.0));
    Vecd uniform = Vecd::Zero(8);
    const double e3 =
        std::abs(loss::cross_entropy_logits<double>(uniform, 3, nullptr) - std::log(8.0));
    loss::LossWeights w;
    const double total = loss::total_gen_loss(1.0, 0.6931, 0.6931, 2.0794, w, true);
    const double e4 = std::abs(total - 1.009703);
    *d = strcat_msg("errs ", e1, " / ", e2, " / ", e3, " / ", e4);
    return e1 < 1e-9 && e2 < 1e-9 && e3 < 1e-9 && e4 < 1e-6;
  });

  // -------------------------------------------------------------------------
  // criterion 9: metric sanity battery
  run_gate(9, "metric identities and monotonicity", [&](std::string *d) {
    const auto t0 = Clock::now();
    Rng rng(55);
    Image img(3, 32, 32);
    for (Eigen::Index i = 0; i < img.v.size(); ++i) img.v.data()[i] = float(rng.uniform(-1, 1));
    bool ok = metrics::psnr(img, img) == metrics::kPsnrCapDb;
    ok = ok && metrics::ssim(img, img) == 1.0;

    std::vector<Matd> lms{Matd::Random(4, 2), Matd::Random(4, 2)};
    ok = ok && metrics::lmd(lms, lms) == 0.0;

    double last = 1e9;
    for (const double amp : {0.02, 0.08, 0.3}) {
      Image noisy = img;
      Rng nrng(9);
      for (Eigen::Index i = 0; i < noisy.v.size(); ++i)
        noisy.v.data()[i] += float(amp * nrng.normal());
      const double v = metrics::psnr(img, noisy);
      ok = ok && v < last;
      last = v;
    }

    std::vector<Vecd> logits;
    std::vector<int> labels;
    Rng crng(77);
    for (int i = 0; i < 300; ++i) {
      Vecd l(8);
      for (int j = 0; j < 8; ++j) l(j) = crng.uniform(-1, 1);
      logits.push_back(l);
      labels.push_back(int(crng.uniform_int(8)));
    }
    const auto lra = metrics::lip_reading_accuracy(logits, labels);
    ok = ok && lra.top1 <= lra.top5;

    const std::vector<Image> still{img, img, img};
    const auto motion = metrics::motion_intensity(still);
    ok = ok && motion.map.maxCoeff() == 0.0 && motion.map.minCoeff() == 0.0;

    const double dt = secs_since(t0);
    *d = strcat_msg("identities, noise monotonicity, top1<=top5, static motion; ", dt, " s");
    return ok && dt < 30.0;
  });

  // -------------------------------------------------------------------------
  // shared corpus for training-based gates
  std::printf("-- building synthetic corpus fixture...\n");
  std::fflush(stdout);
  const auto corpus_cfg = corpus_config();
  const std::string corpus_path = work + "/corpus.tfar";
  data::write_synthetic_corpus(corpus_cfg, corpus_path);
  const data::Corpus corpus = data::Corpus::open(corpus_path);
  const model::ModelConfig mcfg = model_config(corpus);

  // -------------------------------------------------------------------------
  // criterion 5: single-sample overfit
  run_gate(5, "stage-1 overfit of one sample reaches L_rec < 0.02", [&](std::string *d) {
    const auto t0 = Clock::now();
    data::SyntheticAvatarConfig one = corpus_cfg;
    one.clip_frames = 8;
    one.train_clips = 1;
    one.test_clips = 0;
    one.rng_seed = 7;
    const std::string cpath = work + "/overfit.tfar";
    data::write_synthetic_corpus(one, cpath);
    const data::Corpus c1 = data::Corpus::open(cpath);
    model::ModelConfig m1 = model_config(c1);
    train::TrainConfig t1;
    t1.stage1_epochs = 500;  // one clip, batch 1: one step per epoch
    t1.stage2_epochs = 0;
    t1.batch_size = 1;
    t1.learning_rate = 2e-3;
    t1.seed = 11;
    train::Trainer trainer(m1, t1, c1, work + "/overfit_run");
    trainer.train_stage1();
    const double final_loss = trainer.stage1_epoch_losses().back();
    const double dt = secs_since(t0);
    *d = strcat_msg("L_rec ", final_loss, " after 500 steps, ", dt, " s");
    return final_loss < 0.02 && dt < 300.0;
  });

  // -------------------------------------------------------------------------
  // criterion 6: staged-training contract
  run_gate(6, "zero-weight stage 2 equals stage 1; resume equals straight run",
           [&](std::string *d) {
    data::SyntheticAvatarConfig tiny = corpus_cfg;
    tiny.clip_frames = 8;
    tiny.train_clips = 6;
    tiny.test_clips = 2;
    tiny.rng_seed = 99;
    const std::string cpath = work + "/tiny.tfar";
    data::write_synthetic_corpus(tiny, cpath);
    const data::Corpus ct = data::Corpus::open(cpath);
    model::ModelConfig mt = model_config(ct);
    mt.enc_channels = {4, 6, 8, 10, 12};
    mt.z_audio_dim = 12;
    mt.z_image_dim = 12;
    mt.hidden_dim = 16;
    mt.audio_channels = {4, 6, 8};
    mt.disc_image_channels = {4, 6, 8, 10};
    mt.disc_video_channels = {4, 6, 8};
    mt.lipread_channels = {4, 6, 8};

    train::TrainConfig base;
    base.batch_size = 2;
    base.seed = 31;
    base.stage1_epochs = 2;
    base.stage2_epochs = 0;
    train::Trainer pure(mt, base, ct, work + "/c6_pure");
    pure.train_stage1();

    train::TrainConfig mixed = base;
    mixed.stage1_epochs = 1;
    mixed.stage2_epochs = 1;
    mixed.weights.lambda_i = 0;
    mixed.weights.lambda_v = 0;
    mixed.weights.lambda_l = 0;
    mixed.skip_disc_updates = true;
    train::Trainer two(mt, mixed, ct, work + "/c6_mixed");
    two.train_stage1();
    two.train_stage2();

    double drift0 = 0;
    {
      auto pa = pure.generator().params(), pb = two.generator().params();
      for (size_t i = 0; i < pa.size(); ++i)
        drift0 = std::max(drift0, double((pa[i]->value - pb[i]->value).cwiseAbs().maxCoeff()));
    }

    // resume path: one epoch, checkpoint, fresh trainer, one more epoch
    train::TrainConfig first = base;
    first.stage1_epochs = 1;
    train::Trainer head(mt, first, ct, work + "/c6_head");
    head.train_stage1();
    head.save_checkpoint_file(work + "/c6_mid.tfar");
    train::Trainer tail(mt, base, ct, work + "/c6_tail");
    tail.resume(work + "/c6_mid.tfar", /*force=*/true);
    tail.train_stage1();

    double drift1 = 0;
    {
      auto pa = pure.generator().params(), pb = tail.generator().params();
      for (size_t i = 0; i < pa.size(); ++i)
        drift1 = std::max(drift1, double((pa[i]->value - pb[i]->value).cwiseAbs().maxCoeff()));
    }
    *d = strcat_msg("zero-weight drift ", drift0, " (bit-exact requires 0), resume drift ",
                    drift1);
    return drift0 == 0.0 && drift1 <= 1e-7;
  });

  // -------------------------------------------------------------------------
  // criteria 7/8 fixtures: judge + four trained runs under one budget
  std::printf("-- pretraining held-out lip-reading judge...\n");
  std::fflush(stdout);
  Rng judge_rng(derive_seed(4141, "judge"));
  model::LipReader<float> judge(mcfg, judge_rng);
  const double judge_acc = train::pretrain_lipreader_on(
      judge, corpus, corpus.split_indices("train"), corpus.split_indices("test"),
      base_train_config().lipread_pretrain_epochs, base_train_config().lipread_lr, 8,
      derive_seed(4141, "judge-train"));
  std::printf("-- judge held-out top-1 on real clips: %.3f\n", judge_acc);
  std::fflush(stdout);

  const auto t_budget = Clock::now();
  std::printf("-- training scheme runs (same budget each)...\n");
  std::fflush(stdout);
  train::TrainConfig cfg_rec = base_train_config();
  cfg_rec.scheme = model::GenerationScheme::kRecurrent;
  TrainedRun rec_full = train_run(mcfg, cfg_rec, corpus, work + "/run_recurrent", true);
  std::printf("   recurrent(+lip) done in %.0f s\n", rec_full.wall_seconds);
  std::fflush(stdout);

  train::TrainConfig cfg_frame = cfg_rec;
  cfg_frame.scheme = model::GenerationScheme::kFrameToFrame;
  TrainedRun frame_full = train_run(mcfg, cfg_frame, corpus, work + "/run_frame", true);
  std::printf("   frame-to-frame done in %.0f s\n", frame_full.wall_seconds);
  std::fflush(stdout);

  train::TrainConfig cfg_seq = cfg_rec;
  cfg_seq.scheme = model::GenerationScheme::kSequential;
  TrainedRun seq_full = train_run(mcfg, cfg_seq, corpus, work + "/run_sequential", true);
  std::printf("   sequential done in %.0f s\n", seq_full.wall_seconds);
  std::fflush(stdout);

  train::TrainConfig cfg_noll = cfg_rec;
  cfg_noll.weights.lambda_l = 0;
  TrainedRun rec_noll = train_run(mcfg, cfg_noll, corpus, work + "/run_recurrent_noll", false);
  std::printf("   recurrent(no lip loss) done in %.0f s\n", rec_noll.wall_seconds);
  std::fflush(stdout);
  const double budget_seconds = secs_since(t_budget);

  const std::vector<int> test_idx = corpus.split_indices("test");

  // criterion 7: scheme ablation directional reproduction
  run_gate(7, "recurrent beats frame (off-mouth motion) and sequential (identity)",
           [&](std::string *d) {
    const int motion_clips = 16;
    const auto m_rec = eval::generator_motion_stats(rec_full.trainer->generator(),
                                                    rec_full.trainer->norm_stats(), corpus,
                                                    test_idx, motion_clips);
    const auto m_frame = eval::generator_motion_stats(frame_full.trainer->generator(),
                                                      frame_full.trainer->norm_stats(), corpus,
                                                      test_idx, motion_clips);
    eval::write_motion_map_png(work + "/motion_recurrent.png", m_rec.map);
    eval::write_motion_map_png(work + "/motion_frame.png", m_frame.map);

    const double drift_rec = eval::identity_drift_final_quarter(
        rec_full.trainer->generator(), rec_full.trainer->norm_stats(), corpus, test_idx, 0);
    const double drift_seq = eval::identity_drift_final_quarter(
        seq_full.trainer->generator(), seq_full.trainer->norm_stats(), corpus, test_idx, 0);

    *d = strcat_msg("off-mouth motion rec ", m_rec.outside_mean, " vs frame ",
                    m_frame.outside_mean, "; final-quarter identity L1 rec ", drift_rec,
                    " vs seq ", drift_seq, "; training budget ", budget_seconds, " s");
    return m_rec.outside_mean < m_frame.outside_mean && drift_rec < drift_seq &&
           budget_seconds < 3600.0;
  });

  // criterion 8: lip-reading trend under the lip loss
  run_gate(8, "lip loss raises held-out lip-reading accuracy above 3x chance",
           [&](std::string *d) {
    const auto with_ll = eval::generated_lip_accuracy(rec_full.trainer->generator(),
                                                      rec_full.trainer->norm_stats(), corpus,
                                                      judge, test_idx, 0);
    const auto without_ll = eval::generated_lip_accuracy(rec_noll.trainer->generator(),
                                                         rec_noll.trainer->norm_stats(), corpus,
                                                         judge, test_idx, 0);
    int degen_with = 0, degen_without = 0;
    const double ap_with = eval::generated_aperture_correlation(
        rec_full.trainer->generator(), rec_full.trainer->norm_stats(), corpus, test_idx, 0,
        &degen_with);
    const double ap_without = eval::generated_aperture_correlation(
        rec_noll.trainer->generator(), rec_noll.trainer->norm_stats(), corpus, test_idx, 0,
        &degen_without);

    *d = strcat_msg("top1 with lip loss ", with_ll.top1, " vs without ", without_ll.top1,
                    " (judge on real ", judge_acc, "); aperture corr ", ap_with, " vs ",
                    ap_without, " (degenerate ", degen_with, "/", degen_without, ")");
    return with_ll.top1 > without_ll.top1 && with_ll.top1 > 0.375 && judge_acc > 0.8 &&
           ap_with >= ap_without;
  });

  // -------------------------------------------------------------------------
  // criterion 10: byte-identical generation through the CLI
  run_gate(10, "generate twice with a fixed seed: byte-identical PNG frames",
           [&](std::string *d) {
    const std::string ckpt = rec_full.trainer->save_final_checkpoint();

    std::vector<float> wav;
    const auto sample = data::synth_sample(corpus_cfg, 3, 424242, &wav);
    write_png_rgb(work + "/identity.png", image_to_u8(sample.identity), data::kFrameSize,
                  data::kFrameSize);
    write_wav(work + "/drive.wav", wav, corpus_cfg.mfcc.sample_rate_hz);

    auto run_gen = [&](const std::string &out) {
      const std::string cmd = std::string(TFG_CLI_PATH) + " generate --checkpoint " + ckpt +
                              " --identity " + work + "/identity.png --wav " + work +
                              "/drive.wav --out " + out + " --seed 99 > /dev/null 2>&1";
      return std::system(cmd.c_str());
    };
    if (run_gen(work + "/gen1") != 0 || run_gen(work + "/gen2") != 0) {
      *d = "cli generate failed";
      return false;
    }
    int frames = 0;
    for (const auto &e : fs::directory_iterator(work + "/gen1")) {
      if (e.path().extension() != ".png") continue;
      ++frames;
      std::ifstream f1(e.path(), std::ios::binary);
      std::ifstream f2(work + "/gen2/" + e.path().filename().string(), std::ios::binary);
      std::vector<char> b1((std::istreambuf_iterator<char>(f1)),
                           std::istreambuf_iterator<char>());
      std::vector<char> b2((std::istreambuf_iterator<char>(f2)),
                           std::istreambuf_iterator<char>());
      if (b1.empty() || b1 != b2) {
        *d = strcat_msg("frame ", e.path().filename().string(), " differs");
        return false;
      }
    }
    *d = strcat_msg(frames, " frames byte-identical across runs");
    return frames == corpus_cfg.clip_frames;
  });

  // -------------------------------------------------------------------------
  std::printf("\n%zu criteria, total %.0f s\n", g_gates.size(), secs_since(suite_start));
  int failures = 0;
  for (const Gate &g : g_gates) {
    if (!g.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria PASSED\n");
  return 0;
}
