// data/sample.hpp

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

#ifndef TFG_DATA_SAMPLE_HPP_
#define TFG_DATA_SAMPLE_HPP_

#include <string>
#include <vector>

#include "tfg/audio/features.hpp"
#include "tfg/core/image.hpp"

namespace tfg::data {

constexpr int kFrameSize = 128;  // face crops are kFrameSize x kFrameSize RGB

// One aligned training/evaluation unit: an identity still, the ground-truth
// frame sequence, one MFCC window per frame, and optional supervision.
struct TalkingFaceSample {
  std::string id;
  Image identity;                      // member of frames (or same-clip crop)
  std::vector<Image> frames;           // length K
  audio::MfccSequence audio_features;  // length K
  int word_label = -1;
  bool has_label = false;
  std::vector<Matd> landmarks;  // per frame: P x 2 (x, y) pixel coords
  bool has_landmarks = false;
  double fps = 25.0;

  int length() const { return int(frames.size()); }
  void validate() const;
};

}  // namespace tfg::data

#endif  // TFG_DATA_SAMPLE_HPP_
