// train/checkpoint.hpp

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

#ifndef TFG_TRAIN_CHECKPOINT_HPP_
#define TFG_TRAIN_CHECKPOINT_HPP_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfg/audio/features.hpp"
#include "tfg/nn/adam.hpp"

namespace tfg::train {

// Everything beside the raw tensors: run configuration (whose hash gates
// reloads), feature normalization, training progress, named RNG streams.
struct CheckpointMeta {
  nlohmann::json config;
  nlohmann::json progress;
  audio::FeatureNormStats norm_stats;
  std::map<std::string, std::vector<uint64_t>> rng_states;
};

// Archive layout (see docs/formats.md): config.json, progress.json,
// norm_stats.f64, rng/<stream>.u64, tensors/<param>, opt/<name>/<param>/{m,v,t}.
void save_checkpoint(const std::string &path, const CheckpointMeta &meta,
                     const std::vector<nn::Param<float> *> &params,
                     const std::map<std::string, nn::Adam<float> *> &optimizers);

// Restores tensors and optimizer slots in place; shapes must match. The
// caller compares meta.config against its own configuration and decides
// whether a mismatch is fatal.
CheckpointMeta load_checkpoint(const std::string &path,
                               const std::vector<nn::Param<float> *> &params,
                               const std::map<std::string, nn::Adam<float> *> &optimizers);

// Reads only the embedded configuration (cheap inspection).
nlohmann::json peek_checkpoint_config(const std::string &path);

}  // namespace tfg::train

#endif  // TFG_TRAIN_CHECKPOINT_HPP_
