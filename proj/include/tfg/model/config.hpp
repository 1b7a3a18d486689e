// model/config.hpp

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

#ifndef TFG_MODEL_CONFIG_HPP_
#define TFG_MODEL_CONFIG_HPP_

#include <string>
#include <vector>

#include "tfg/core/common.hpp"

namespace tfg::model {

// How successive frames are conditioned on the past.
enum class GenerationScheme {
  kFrameToFrame,       // each frame from (identity latent, audio window) only
  kSequential,         // conditioned on the last L generated frames
  kRecurrent,          // hidden state carried, identity latent re-injected
  kRecurrentPrevFrame  // recurrent plus a latent of the previous frame
};

std::string to_string(GenerationScheme s);
GenerationScheme scheme_from_string(const std::string &name);

struct ModelConfig {
  int image_size = 128;

  // generator
  std::vector<int> enc_channels = {64, 128, 256, 512, 512};  // 128 -> 4 over 5 levels
  int z_audio_dim = 256;
  int z_image_dim = 256;
  int hidden_dim = 256;
  std::vector<int> audio_channels = {32, 64, 96};
  int mfcc_rows = 33, mfcc_cols = 13;
  int sequential_window = 2;  // L

  // adversaries
  std::vector<int> disc_image_channels = {64, 128, 256, 512};
  std::vector<int> disc_video_channels = {64, 128, 256};
  std::vector<int> lipread_channels = {32, 64, 96};
  int video_clip_len = 8;  // T_v
  int mouth_crop = 48;
  int vocab = 8;

  // Desk-scale preset: same topology, thin channels; trains in minutes on CPU.
  static ModelConfig small();
  // Minimal dims for finite-difference checks.
  static ModelConfig toy();

  int levels() const { return int(enc_channels.size()); }
  int bottom_size() const { return image_size >> levels(); }
  void validate() const;
};

}  // namespace tfg::model

#endif  // TFG_MODEL_CONFIG_HPP_
