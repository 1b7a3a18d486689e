// audio/features.hpp

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

#ifndef TFG_AUDIO_FEATURES_HPP_
#define TFG_AUDIO_FEATURES_HPP_

#include <string>
#include <vector>

#include "tfg/audio/mfcc.hpp"

namespace tfg::audio {

struct Waveform {
  std::vector<float> samples;  // [-1, 1]
  int sample_rate_hz = 0;

  double duration_ms() const { return 1000.0 * double(samples.size()) / sample_rate_hz; }
  void validate() const;
};

struct SampleRange {
  int64_t begin = 0, end = 0;  // [begin, end) in samples
};

// One window per video frame, uniform stride, ordered by start time.
struct MfccSequence {
  std::vector<MfccWindow> windows;

  int length() const { return int(windows.size()); }
};

// Sliding-window slicing. count = floor((T - W) / S) + 1 for duration T,
// window W, stride S. Clips shorter than one window are rejected.
std::vector<SampleRange> slice_windows(const Waveform &w, double window_ms, double stride_ms);

// Full clip featurization with stride locked to the frame period 1/fps, so
// window t pairs with video frame t.
MfccSequence featurize_clip(const Waveform &w, double video_fps, const MfccConfig &cfg);

// Per-coefficient z-score statistics gathered over a training corpus; applied
// to encoder inputs and persisted inside checkpoints.
struct FeatureNormStats {
  Vecd mean;  // n_coeffs
  Vecd stddev;

  bool valid() const { return mean.size() > 0 && mean.size() == stddev.size(); }
  Matd apply(const Matd &coeffs) const;
};

FeatureNormStats compute_norm_stats(const std::vector<MfccSequence> &sequences);

// Binary feature-cache entry (format in docs/formats.md). Files are keyed by
// (clip id, config hash) through cache_file_name.
void save_mfcc_sequence(const std::string &path, const MfccSequence &seq);
MfccSequence load_mfcc_sequence(const std::string &path);
std::string cache_file_name(const std::string &clip_id, const MfccConfig &cfg);

}  // namespace tfg::audio

#endif  // TFG_AUDIO_FEATURES_HPP_
