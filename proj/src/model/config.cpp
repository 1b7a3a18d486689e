// model/config.cpp

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

#include "tfg/model/config.hpp"

namespace tfg::model {

std::string to_string(GenerationScheme s) {
  switch (s) {
    case GenerationScheme::kFrameToFrame:
      return "frame";
    case GenerationScheme::kSequential:
      return "sequential";
    case GenerationScheme::kRecurrent:
      return "recurrent";
    case GenerationScheme::kRecurrentPrevFrame:
      return "recurrent-prev";
  }
  return "recurrent";
}

GenerationScheme scheme_from_string(const std::string &name) {
  if (name == "frame") return GenerationScheme::kFrameToFrame;
  if (name == "sequential") return GenerationScheme::kSequential;
  if (name == "recurrent") return GenerationScheme::kRecurrent;
  if (name == "recurrent-prev") return GenerationScheme::kRecurrentPrevFrame;
  throw Error(strcat_msg("unknown generation scheme '", name,
                         "' (expected frame|sequential|recurrent|recurrent-prev)"));
}

ModelConfig ModelConfig::small() {
  ModelConfig c;
  c.enc_channels = {8, 16, 24, 32, 48};
  c.z_audio_dim = 48;
  c.z_image_dim = 48;
  c.hidden_dim = 64;
  c.audio_channels = {8, 16, 24};
  c.disc_image_channels = {8, 16, 24, 32};
  c.disc_video_channels = {8, 16, 24};
  c.lipread_channels = {8, 16, 32};
  return c;
}

ModelConfig ModelConfig::toy() {
  ModelConfig c;
  c.image_size = 16;
  c.enc_channels = {4, 6};
  c.z_audio_dim = 6;
  c.z_image_dim = 6;
  c.hidden_dim = 8;
  c.audio_channels = {3};
  c.mfcc_rows = 9;
  c.mfcc_cols = 5;
  c.disc_image_channels = {4, 6};
  c.disc_video_channels = {4, 6};
  c.lipread_channels = {4, 6};
  c.video_clip_len = 4;
  c.mouth_crop = 8;
  c.vocab = 4;
  return c;
}

void ModelConfig::validate() const {
  TFG_CHECK(!enc_channels.empty() && !audio_channels.empty(), "empty channel lists");
  TFG_CHECK(image_size > 0 && (image_size % (1 << levels())) == 0, "image_size ", image_size,
            " not divisible by 2^", levels());
  TFG_CHECK(bottom_size() >= 1, "too many encoder levels for image size");
  TFG_CHECK(z_audio_dim > 0 && z_image_dim > 0 && hidden_dim > 0, "bad latent dims");
  TFG_CHECK(sequential_window >= 1, "sequential window L must be >= 1");
  TFG_CHECK(mfcc_rows > 0 && mfcc_cols > 0, "bad MFCC input dims");
  TFG_CHECK(!disc_image_channels.empty() && !disc_video_channels.empty() &&
                !lipread_channels.empty(),
            "empty discriminator channel lists");
  TFG_CHECK(video_clip_len >= 2, "video clip length too small");
  TFG_CHECK(mouth_crop >= 8 && mouth_crop <= image_size, "bad mouth crop size");
  TFG_CHECK(vocab >= 2, "vocabulary must have at least 2 words");
}

}  // namespace tfg::model
