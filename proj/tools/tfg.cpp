// tools/tfg.cpp

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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tfg/data/corpus.hpp"
#include "tfg/eval/evaluate.hpp"
#include "tfg/io/config_json.hpp"
#include "tfg/io/png_io.hpp"
#include "tfg/io/wav.hpp"
#include "tfg/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string default_run_root() {
  const char *env = std::getenv("TFG_RUN_ROOT");
  return env != nullptr ? env : "runs";
}

struct RunConfigs {
  tfg::model::ModelConfig model;
  tfg::train::TrainConfig train;
  tfg::data::SyntheticAvatarConfig synth;
  std::string corpus_path;
};

RunConfigs load_run_configs(const std::string &config_path) {
  RunConfigs rc;
  rc.model = tfg::model::ModelConfig::small();
  if (config_path.empty()) return rc;
  const json j = tfg::load_json_file(config_path);
  if (j.contains("model")) rc.model = j.at("model").get<tfg::model::ModelConfig>();
  if (j.contains("train")) rc.train = j.at("train").get<tfg::train::TrainConfig>();
  if (j.contains("synthetic")) rc.synth = j.at("synthetic").get<tfg::data::SyntheticAvatarConfig>();
  if (j.contains("corpus")) rc.corpus_path = j.at("corpus").get<std::string>();
  return rc;
}

// aligns the model input geometry with the corpus feature configuration
void sync_model_to_corpus(tfg::model::ModelConfig *m, const tfg::data::Corpus &corpus) {
  const tfg::audio::MfccConfig &mfcc = corpus.mfcc_config();
  m->mfcc_rows = mfcc.sub_frames_per_window();
  m->mfcc_cols = mfcc.n_coeffs;
  if (const auto *sc = corpus.synthetic_config()) m->vocab = sc->vocabulary_size;
}

struct LoadedGenerator {
  std::unique_ptr<tfg::model::Generator<float>> gen;
  tfg::audio::FeatureNormStats norm;
  tfg::audio::MfccConfig mfcc;
  json config;
};

LoadedGenerator load_generator(const std::string &checkpoint_path) {
  LoadedGenerator out;
  out.config = tfg::train::peek_checkpoint_config(checkpoint_path);
  TFG_CHECK(out.config.contains("model") && out.config.contains("train"),
            "checkpoint lacks model/train config: ", checkpoint_path);
  const auto mcfg = out.config.at("model").get<tfg::model::ModelConfig>();
  const auto tcfg = out.config.at("train").get<tfg::train::TrainConfig>();
  if (out.config.contains("mfcc")) out.mfcc = out.config.at("mfcc").get<tfg::audio::MfccConfig>();
  out.gen = std::make_unique<tfg::model::Generator<float>>(
      mcfg, tcfg.scheme, tfg::derive_seed(tcfg.seed, "init/gen"));
  std::map<std::string, tfg::nn::Adam<float> *> no_opts;
  const auto meta =
      tfg::train::load_checkpoint(checkpoint_path, out.gen->params(), no_opts);
  TFG_CHECK(meta.norm_stats.valid(), "checkpoint has no normalization stats: ", checkpoint_path);
  out.norm = meta.norm_stats;
  return out;
}

std::unique_ptr<tfg::model::LipReader<float>> load_lipreader(const std::string &path) {
  const json cfg = tfg::train::peek_checkpoint_config(path);
  TFG_CHECK(cfg.contains("model"), "lip-reader checkpoint lacks model config: ", path);
  const auto mcfg = cfg.at("model").get<tfg::model::ModelConfig>();
  tfg::Rng rng(1);
  auto net = std::make_unique<tfg::model::LipReader<float>>(mcfg, rng);
  std::map<std::string, tfg::nn::Adam<float> *> no_opts;
  std::vector<tfg::nn::Param<float> *> params = net->params();
  tfg::train::load_checkpoint(path, params, no_opts);
  return net;
}

void save_lipreader(const std::string &path, tfg::model::LipReader<float> &net,
                    const tfg::model::ModelConfig &mcfg,
                    const tfg::audio::FeatureNormStats &norm) {
  tfg::train::CheckpointMeta meta;
  meta.config = json{{"kind", "lipreader"}, {"model", mcfg}};
  meta.progress = json::object();
  meta.norm_stats = norm;
  std::map<std::string, tfg::nn::Adam<float> *> no_opts;
  tfg::train::save_checkpoint(path, meta, net.params(), no_opts);
}

int cmd_synth_data(const std::string &config_path, const std::string &out_path,
                   std::optional<uint64_t> seed) {
  RunConfigs rc = load_run_configs(config_path);
  if (seed) rc.synth.rng_seed = *seed;
  rc.synth.validate();
  if (!fs::path(out_path).parent_path().empty())
    fs::create_directories(fs::path(out_path).parent_path());
  const int clips = tfg::data::write_synthetic_corpus(rc.synth, out_path);
  std::cout << "wrote " << clips << " clips (" << rc.synth.train_clips << " train / "
            << rc.synth.test_clips << " test), vocabulary " << rc.synth.vocabulary_size
            << ", frames per clip " << rc.synth.clip_frames << " -> " << out_path << "\n";
  return 0;
}

int cmd_train(const std::string &config_path, const std::string &corpus_flag,
              const std::string &out_flag, std::optional<uint64_t> seed,
              const std::string &scheme_flag, std::optional<int> stage1,
              std::optional<int> stage2, const std::string &resume, bool force_load) {
  RunConfigs rc = load_run_configs(config_path);
  if (!corpus_flag.empty()) rc.corpus_path = corpus_flag;
  TFG_CHECK(!rc.corpus_path.empty(), "no corpus given (flag --corpus or config key 'corpus')");
  if (seed) rc.train.seed = *seed;
  if (!scheme_flag.empty()) rc.train.scheme = tfg::model::scheme_from_string(scheme_flag);
  if (stage1) rc.train.stage1_epochs = *stage1;
  if (stage2) rc.train.stage2_epochs = *stage2;

  tfg::data::Corpus corpus = tfg::data::Corpus::open(rc.corpus_path);
  sync_model_to_corpus(&rc.model, corpus);
  rc.model.validate();
  rc.train.validate();

  std::string run_dir = out_flag;
  if (run_dir.empty()) {
    json fingerprint;
    fingerprint["model"] = rc.model;
    fingerprint["train"] = rc.train;
    run_dir = default_run_root() + "/run-" +
              tfg::hash_hex(tfg::json_hash(fingerprint)).substr(0, 8);
  }
  fs::create_directories(run_dir);

  tfg::train::Trainer trainer(rc.model, rc.train, corpus, run_dir);
  tfg::save_json_file(run_dir + "/config.json", trainer.config_json());

  if (!resume.empty()) {
    trainer.resume(resume, force_load);
    std::cout << "resumed from " << resume << "\n";
  }

  const bool labeled = !corpus.split_indices("train").empty() &&
                       corpus.load(corpus.split_indices("train").front()).has_label;
  if (labeled && rc.train.lipread_pretrain_epochs > 0 && rc.train.stage2_epochs > 0 &&
      rc.train.weights.lambda_l > 0) {
    const double acc = trainer.pretrain_lipreader();
    std::cout << "lip-reader pre-training done, held-out top-1 " << acc << "\n";
    save_lipreader(run_dir + "/lipreader_pretrained.tfar", trainer.lipreader(), rc.model,
                   trainer.norm_stats());
  }

  trainer.train_stage1();
  std::cout << "stage 1 complete (" << rc.train.stage1_epochs << " epochs)\n";
  trainer.save_checkpoint_file(run_dir + "/ckpt_stage1.tfar");
  trainer.train_stage2();
  std::cout << "stage 2 complete (" << rc.train.stage2_epochs << " epochs)\n";
  const std::string final_path = trainer.save_final_checkpoint();
  std::cout << "final checkpoint: " << final_path << "\n";
  return 0;
}

int cmd_generate(const std::string &checkpoint, const std::string &identity_path,
                 const std::string &wav_path, const std::string &out_dir, uint64_t seed) {
  LoadedGenerator lg = load_generator(checkpoint);

  const tfg::PngImage png = tfg::read_png(identity_path);
  tfg::Image identity = tfg::image_from_u8(png.rgb, png.h, png.w);
  if (identity.h != tfg::data::kFrameSize || identity.w != tfg::data::kFrameSize) {
    identity = tfg::data::crop_resize_face(identity,
                                           tfg::data::BoundingBox{0, 0, identity.w, identity.h});
  }

  const tfg::WavData wav_raw = tfg::read_wav(wav_path);
  tfg::audio::Waveform wav;
  wav.sample_rate_hz = lg.mfcc.sample_rate_hz;
  wav.samples = tfg::resample_linear(wav_raw.samples, wav_raw.sample_rate_hz,
                                     lg.mfcc.sample_rate_hz);
  const double fps = lg.config.contains("fps") ? lg.config.at("fps").get<double>() : 25.0;
  const tfg::audio::MfccSequence seq = tfg::audio::featurize_clip(wav, fps, lg.mfcc);

  std::vector<tfg::Matf> windows;
  for (const auto &w : seq.windows) windows.push_back(lg.norm.apply(w.coeffs).cast<float>());

  tfg::model::GeneratedSequence out;
  out.frames = lg.gen->generate(identity, windows, false);
  out.scheme = lg.gen->scheme();
  out.seed = seed;
  fs::create_directories(out_dir);
  for (size_t t = 0; t < out.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.png", t);
    tfg::write_png_rgb(std::string(out_dir) + "/" + name, tfg::image_to_u8(out.frames[t]),
                       out.frames[t].h, out.frames[t].w);
  }

  json meta;
  meta["frames"] = out.frames.size();
  meta["fps"] = fps;
  meta["scheme"] = tfg::model::to_string(out.scheme);
  meta["seed"] = out.seed;
  meta["checkpoint"] = checkpoint;
  meta["config_hash"] = tfg::hash_hex(tfg::json_hash(lg.config));
  tfg::save_json_file(std::string(out_dir) + "/generation.json", meta);
  std::cout << "generated " << out.frames.size() << " frames -> " << out_dir << "\n";
  return 0;
}

int cmd_evaluate(const std::string &checkpoint, const std::string &corpus_path,
                 const std::string &out_path, const std::string &lipreader_path,
                 const std::string &split, bool per_sample, int max_clips, bool ground_truth) {
  tfg::data::Corpus corpus = tfg::data::Corpus::open(corpus_path);
  tfg::eval::EvalOptions opts;
  opts.split = split;
  opts.per_sample = per_sample;
  opts.max_clips = max_clips;

  json report;
  if (ground_truth) {
    // corpus evaluated against itself (identity sanity path)
    const auto indices = corpus.split_indices(split);
    TFG_CHECK(!indices.empty(), "no clips in split '", split, "'");
    double psnr_sum = 0, ssim_sum = 0, lmd_sum = 0;
    int n = 0;
    for (int idx : indices) {
      if (max_clips > 0 && n >= max_clips) break;
      const auto s = corpus.load(idx);
      double clip_psnr = 0, clip_ssim = 0;
      for (int t = 0; t < s.length(); ++t) {
        clip_psnr += tfg::metrics::psnr(s.frames[size_t(t)], s.frames[size_t(t)]);
        clip_ssim += tfg::metrics::ssim(s.frames[size_t(t)], s.frames[size_t(t)]);
      }
      psnr_sum += clip_psnr / s.length();
      ssim_sum += clip_ssim / s.length();
      if (s.has_landmarks) lmd_sum += tfg::metrics::lmd(s.landmarks, s.landmarks);
      ++n;
    }
    report["split"] = split;
    report["metrics"] =
        json{{"clips", n}, {"psnr", psnr_sum / n}, {"ssim", ssim_sum / n}, {"lmd", lmd_sum / n}};
    report["skipped"] = json::array();
  } else {
    TFG_CHECK(!checkpoint.empty(), "--checkpoint required unless --ground-truth is given");
    LoadedGenerator lg = load_generator(checkpoint);
    std::unique_ptr<tfg::model::LipReader<float>> judge;
    std::string lp = lipreader_path;
    if (lp.empty()) {
      const fs::path sibling = fs::path(checkpoint).parent_path() / "lipreader_pretrained.tfar";
      if (fs::exists(sibling)) lp = sibling.string();
    }
    if (!lp.empty()) judge = load_lipreader(lp);
    report = tfg::eval::evaluate_generator(*lg.gen, lg.norm, corpus, judge.get(), opts);
    report["checkpoint"] = checkpoint;
  }

  if (!fs::path(out_path).parent_path().empty())
    fs::create_directories(fs::path(out_path).parent_path());
  tfg::save_json_file(out_path, report);
  std::cout << "evaluation report -> " << out_path << "\n";
  std::cout << report["metrics"].dump(2) << "\n";
  return 0;
}

int cmd_ablate(const std::string &config_path, const std::string &corpus_flag,
               const std::string &out_dir, std::optional<uint64_t> seed) {
  RunConfigs rc = load_run_configs(config_path);
  if (!corpus_flag.empty()) rc.corpus_path = corpus_flag;
  TFG_CHECK(!rc.corpus_path.empty(), "no corpus given (flag --corpus or config key 'corpus')");
  if (seed) rc.train.seed = *seed;
  fs::create_directories(out_dir);

  tfg::data::Corpus corpus = tfg::data::Corpus::open(rc.corpus_path);
  sync_model_to_corpus(&rc.model, corpus);
  rc.model.validate();
  rc.train.validate();

  const auto test_idx = corpus.split_indices("test");
  json report;
  report["loss_ablation"] = json::array();
  report["scheme_comparison"] = json::array();

  // shared judge for every variant
  tfg::Rng judge_rng(tfg::derive_seed(rc.train.seed, "ablate/judge"));
  tfg::model::LipReader<float> judge(rc.model, judge_rng);
  const double judge_acc = tfg::train::pretrain_lipreader_on(
      judge, corpus, corpus.split_indices("train"), test_idx, rc.train.lipread_pretrain_epochs,
      rc.train.lipread_lr, 8, tfg::derive_seed(rc.train.seed, "ablate/judge"));
  report["judge_heldout_top1"] = judge_acc;

  auto train_variant = [&](const std::string &name, tfg::train::TrainConfig tcfg)
      -> std::unique_ptr<tfg::train::Trainer> {
    auto trainer = std::make_unique<tfg::train::Trainer>(rc.model, tcfg, corpus,
                                                         out_dir + "/" + name);
    const bool adv = tcfg.stage2_epochs > 0 &&
                     (tcfg.weights.lambda_i > 0 || tcfg.weights.lambda_v > 0 ||
                      tcfg.weights.lambda_l > 0);
    if (adv && tcfg.weights.lambda_l > 0) trainer->pretrain_lipreader();
    trainer->train_stage1();
    trainer->train_stage2();
    trainer->save_final_checkpoint();
    return trainer;
  };

  auto evaluate_variant = [&](tfg::train::Trainer &t) {
    tfg::eval::EvalOptions opts;
    auto rep = tfg::eval::evaluate_generator(t.generator(), t.norm_stats(), corpus, &judge, opts);
    return rep["metrics"];
  };

  // loss combinations on the configured scheme, mirroring the ablation rows
  struct LossRow {
    const char *name;
    bool use_i, use_v, use_l;
  };
  const LossRow rows[] = {{"L_r", false, false, false},
                          {"L_r_I", true, false, false},
                          {"L_r_I_V", true, true, false},
                          {"L_r_I_V_l", true, true, true}};
  for (const LossRow &row : rows) {
    tfg::train::TrainConfig tcfg = rc.train;
    if (!row.use_i) tcfg.weights.lambda_i = 0;
    if (!row.use_v) tcfg.weights.lambda_v = 0;
    if (!row.use_l) tcfg.weights.lambda_l = 0;
    auto trainer = train_variant(std::string("loss_") + row.name, tcfg);
    json entry;
    entry["losses"] = row.name;
    entry["metrics"] = evaluate_variant(*trainer);
    report["loss_ablation"].push_back(entry);
    std::cout << "ablation row " << row.name << " done\n";
  }

  // scheme comparison with shared seeds and motion-intensity maps
  const tfg::model::GenerationScheme schemes[] = {
      tfg::model::GenerationScheme::kSequential, tfg::model::GenerationScheme::kFrameToFrame,
      tfg::model::GenerationScheme::kRecurrent};
  for (const auto scheme : schemes) {
    tfg::train::TrainConfig tcfg = rc.train;
    tcfg.scheme = scheme;
    const std::string name = tfg::model::to_string(scheme);
    auto trainer = train_variant("scheme_" + name, tcfg);
    const auto motion = tfg::eval::generator_motion_stats(trainer->generator(),
                                                          trainer->norm_stats(), corpus,
                                                          test_idx, 0);
    const std::string map_path = out_dir + "/motion_" + name + ".png";
    tfg::eval::write_motion_map_png(map_path, motion.map);
    json entry;
    entry["scheme"] = name;
    entry["metrics"] = evaluate_variant(*trainer);
    entry["motion_inside_mouth"] = motion.inside_mean;
    entry["motion_outside_mouth"] = motion.outside_mean;
    entry["identity_drift_final_quarter"] = tfg::eval::identity_drift_final_quarter(
        trainer->generator(), trainer->norm_stats(), corpus, test_idx, 0);
    entry["motion_map"] = map_path;
    report["scheme_comparison"].push_back(entry);
    std::cout << "scheme row " << name << " done\n";
  }

  tfg::save_json_file(out_dir + "/ablation_report.json", report);
  std::cout << "ablation report -> " << out_dir << "/ablation_report.json\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"audio-driven talking face generation"};
  app.require_subcommand(1);

  std::string config_path, out_path, corpus_path, checkpoint, identity_path, wav_path;
  std::string scheme_flag, resume_path, lipreader_path, split = "test";
  std::optional<uint64_t> seed_flag;
  std::optional<int> stage1_flag, stage2_flag;
  uint64_t gen_seed = 0;
  bool per_sample = false, force_load = false, ground_truth = false;
  int max_clips = 0;

  auto *synth = app.add_subcommand("synth-data", "generate a synthetic avatar corpus archive");
  synth->add_option("--config", config_path, "run config JSON");
  synth->add_option("--out", out_path, "output archive path")->required();
  synth->add_option("--seed", seed_flag, "corpus rng seed");

  auto *train = app.add_subcommand("train", "two-stage training run");
  train->add_option("--config", config_path, "run config JSON");
  train->add_option("--corpus", corpus_path, "corpus archive or directory");
  train->add_option("--out", out_path, "run directory");
  train->add_option("--seed", seed_flag, "training seed");
  train->add_option("--scheme", scheme_flag, "frame|sequential|recurrent|recurrent-prev");
  train->add_option("--stage1-epochs", stage1_flag, "reconstruction epochs");
  train->add_option("--stage2-epochs", stage2_flag, "adversarial epochs");
  train->add_option("--resume", resume_path, "checkpoint to resume from");
  train->add_flag("--force-load", force_load, "resume across config-hash mismatch");

  auto *gen = app.add_subcommand("generate", "synthesize frames from identity image + WAV");
  gen->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
  gen->add_option("--identity", identity_path, "identity image (PNG)")->required();
  gen->add_option("--wav", wav_path, "driving audio (WAV)")->required();
  gen->add_option("--out", out_path, "output frame directory")->required();
  gen->add_option("--seed", gen_seed, "provenance seed recorded in metadata");

  auto *eval = app.add_subcommand("evaluate", "quantitative evaluation report");
  eval->add_option("--checkpoint", checkpoint, "trained checkpoint");
  eval->add_option("--corpus", corpus_path, "corpus with ground truth")->required();
  eval->add_option("--out", out_path, "report JSON path")->required();
  eval->add_option("--lipreader", lipreader_path, "held-out lip-reading classifier checkpoint");
  eval->add_option("--split", split, "corpus split (default test)");
  eval->add_option("--max-clips", max_clips, "cap evaluated clips");
  eval->add_flag("--per-sample", per_sample, "include per-sample breakdown");
  eval->add_flag("--ground-truth", ground_truth, "evaluate ground truth against itself");

  auto *ablate = app.add_subcommand("ablate", "loss and scheme ablation sweep");
  ablate->add_option("--config", config_path, "run config JSON");
  ablate->add_option("--corpus", corpus_path, "corpus archive or directory");
  ablate->add_option("--out", out_path, "output directory")->required();
  ablate->add_option("--seed", seed_flag, "shared training seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth_data(config_path, out_path, seed_flag);
    if (train->parsed())
      return cmd_train(config_path, corpus_path, out_path, seed_flag, scheme_flag, stage1_flag,
                       stage2_flag, resume_path, force_load);
    if (gen->parsed())
      return cmd_generate(checkpoint, identity_path, wav_path, out_path, gen_seed);
    if (eval->parsed())
      return cmd_evaluate(checkpoint, corpus_path, out_path, lipreader_path, split, per_sample,
                          max_clips, ground_truth);
    if (ablate->parsed()) return cmd_ablate(config_path, corpus_path, out_path, seed_flag);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
