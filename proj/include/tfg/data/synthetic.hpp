// data/synthetic.hpp

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

#ifndef TFG_DATA_SYNTHETIC_HPP_
#define TFG_DATA_SYNTHETIC_HPP_

#include <string>
#include <vector>

#include "tfg/core/rng.hpp"
#include "tfg/data/sample.hpp"

namespace tfg::data {

// Procedural talking-avatar corpus. Each word is a sum of word-specific
// sinusoid carriers shaped by a word-specific amplitude envelope; the
// rendered mouth opening tracks that envelope linearly, so lip sync is exact
// by construction. Word 0 is silence (zero envelope, closed mouth).
struct SyntheticAvatarConfig {
  int vocabulary_size = 8;  // V >= 2
  int clip_frames = 16;     // K >= 4
  double fps = 25.0;
  int train_clips = 1000;
  int test_clips = 200;
  uint64_t rng_seed = 7;

  // face geometry (pixels, in a kFrameSize x kFrameSize canvas)
  int mouth_center_x = 64;
  int mouth_center_y = 96;
  int mouth_width = 28;
  double aperture_gain_px = 28.0;  // aperture = gain * envelope
  // slow whole-head bob with per-clip random phase and period; audio carries
  // no pose information, exactly like natural head motion
  double pose_amplitude_px = 2.0;

  audio::MfccConfig mfcc;

  void validate() const;
  uint64_t hash() const;
};

// Mouth-centered square used by crops, metrics, and the motion-intensity
// inside/outside split. Side length matches the mouth-crop resolution.
struct MouthBox {
  int x0 = 0, y0 = 0, size = 48;
};
MouthBox mouth_box(const SyntheticAvatarConfig &cfg);

// Word envelope in [0, 1]: a word-specific set of syllable bumps over a
// small open-mouth baseline. Built once per clip (jitter draws happen in
// make), then evaluated at any time.
struct WordEnvelope {
  int word_id = 0;
  double base = 0.0;
  std::vector<double> centers, sigmas, amps;

  static WordEnvelope make(const SyntheticAvatarConfig &cfg, int word_id, double duration_s,
                           Rng &jitter_rng);
  double operator()(double tau) const;
};

// Deterministic full sample: waveform -> MFCC windows, rendered frames whose
// mouth aperture is aperture_gain_px * envelope(window midpoint), landmarks.
// waveform_out, when non-null, receives the raw audio the features came from.
TalkingFaceSample synth_sample(const SyntheticAvatarConfig &cfg, int word_id, uint64_t seed,
                               std::vector<float> *waveform_out = nullptr);

// Per-frame envelope values recovered from ground-truth landmarks
// (lip separation divided by the aperture gain).
Vecd envelope_from_landmarks(const TalkingFaceSample &sample, double aperture_gain_px);

// Writes the full train/test corpus as a single archive with a manifest.
// Returns number of clips written.
int write_synthetic_corpus(const SyntheticAvatarConfig &cfg, const std::string &archive_path);

}  // namespace tfg::data

#endif  // TFG_DATA_SYNTHETIC_HPP_
