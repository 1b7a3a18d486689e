// train/trainer.hpp

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

#ifndef TFG_TRAIN_TRAINER_HPP_
#define TFG_TRAIN_TRAINER_HPP_

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tfg/data/corpus.hpp"
#include "tfg/loss/losses.hpp"
#include "tfg/model/discriminators.hpp"
#include "tfg/model/generator.hpp"
#include "tfg/train/checkpoint.hpp"

namespace tfg::train {

struct TrainConfig {
  int stage1_epochs = 30;
  int stage2_epochs = 15;
  double learning_rate = 2e-4;  // ADAM alpha
  double beta1 = 0.5;           // ADAM beta
  double beta2 = 0.999;
  int batch_size = 16;
  loss::LossWeights weights;
  uint64_t seed = 1234;
  model::GenerationScheme scheme = model::GenerationScheme::kRecurrent;
  int checkpoint_every_epochs = 0;  // 0: stage boundaries only
  int lipread_pretrain_epochs = 20;
  double lipread_lr = 1e-3;
  double grad_clip_norm = 5.0;
  int disc_image_frames = 0;        // 0: every frame feeds D_I
  bool skip_disc_updates = false;   // with all-zero weights: stage-1 path
  int64_t cache_limit_mb = 512;     // frame cache budget

  void validate() const;
};

void to_json(nlohmann::json &j, const TrainConfig &c);
void from_json(const nlohmann::json &j, TrainConfig &c);

// Trains a word classifier on real mouth sequences by cross entropy; returns
// held-out top-1 accuracy (NaN when heldout is empty). Errors when no sample
// carries a label. epoch_ce_out, when given, receives the mean training
// cross entropy of every epoch.
double pretrain_lipreader_on(model::LipReader<float> &net, const data::Corpus &corpus,
                             const std::vector<int> &train_idx,
                             const std::vector<int> &heldout_idx, int epochs, double lr,
                             int batch_size, uint64_t seed,
                             std::vector<double> *epoch_ce_out = nullptr);

// Two-stage training driver: reconstruction-only warm-up, then adversarial
// fine-tuning with the three discriminators updated 1:1 with the generator.
class Trainer {
 public:
  Trainer(const model::ModelConfig &mcfg, const TrainConfig &tcfg, const data::Corpus &corpus,
          std::string run_dir);

  // D_l initialization from real data; returns held-out top-1 accuracy.
  double pretrain_lipreader();
  void train_stage1();
  void train_stage2();

  void save_checkpoint_file(const std::string &path);
  std::string save_final_checkpoint();
  void resume(const std::string &checkpoint_path, bool force = false);

  model::Generator<float> &generator() { return *gen_; }
  model::DiscImage<float> &disc_image() { return *d_i_; }
  model::DiscVideo<float> &disc_video() { return *d_v_; }
  model::LipReader<float> &lipreader() { return *d_l_; }
  const audio::FeatureNormStats &norm_stats() const { return norm_; }
  const TrainConfig &config() const { return tcfg_; }
  const model::ModelConfig &model_config() const { return mcfg_; }
  nlohmann::json config_json() const;

  const std::vector<double> &stage1_epoch_losses() const { return stage1_epoch_losses_; }
  const std::vector<double> &stage2_epoch_losses() const { return stage2_epoch_losses_; }

  // MFCC windows of a sample, z-scored with the trainer's corpus statistics.
  std::vector<Matf> normalized_windows(const data::TalkingFaceSample &s) const;

  data::TalkingFaceSample clip(int corpus_index);

 private:
  void run_stage(int stage);
  loss::LossReport train_batch(const std::vector<int> &batch, int stage);
  void disc_batch(const std::vector<int> &batch, loss::LossReport *report);
  void write_log_row(int stage, int epoch, const loss::LossReport &r);
  void save_diagnostic(const std::string &why);
  CheckpointMeta make_meta() const;
  std::vector<nn::Param<float> *> all_params() const;
  std::map<std::string, nn::Adam<float> *> optimizer_map() const;

  model::ModelConfig mcfg_;
  TrainConfig tcfg_;
  const data::Corpus &corpus_;
  std::string run_dir_;

  std::unique_ptr<model::Generator<float>> gen_;
  std::unique_ptr<model::DiscImage<float>> d_i_;
  std::unique_ptr<model::DiscVideo<float>> d_v_;
  std::unique_ptr<model::LipReader<float>> d_l_;
  std::unique_ptr<nn::Adam<float>> adam_g_, adam_d_;

  audio::FeatureNormStats norm_;
  Rng rng_data_, rng_identity_, rng_crop_;
  std::vector<int> train_idx_, test_idx_;

  int stage1_done_ = 0, stage2_done_ = 0;
  int64_t global_step_ = 0;
  bool lipread_pretrained_ = false;
  std::vector<double> stage1_epoch_losses_, stage2_epoch_losses_;
  std::ofstream log_;

  struct CachedClip {
    bool has_frames = false;
    std::vector<uint8_t> frames_u8;
    int k = 0;
    audio::MfccSequence mfcc;
    std::vector<Matd> landmarks;
    bool has_landmarks = false;
    int word_label = -1;
    bool has_label = false;
    std::string id;
    double fps = 25.0;
  };
  std::vector<CachedClip> cache_;
  int64_t cache_bytes_ = 0;
};

}  // namespace tfg::train

#endif  // TFG_TRAIN_TRAINER_HPP_
