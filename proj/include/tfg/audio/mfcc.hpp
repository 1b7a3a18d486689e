// audio/mfcc.hpp

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

#ifndef TFG_AUDIO_MFCC_HPP_
#define TFG_AUDIO_MFCC_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tfg/core/tensor.hpp"

namespace tfg::audio {

// Speech front-end configuration. The feature for one video frame is the
// MFCC matrix of one window_ms-long audio slice, decomposed into short
// sub-frames.
struct MfccConfig {
  int sample_rate_hz = 16000;
  double window_ms = 350.0;
  double sub_frame_ms = 25.0;
  double hop_ms = 10.0;
  int fft_size = 512;  // power of two, >= sub-frame length in samples
  int n_mels = 26;
  int n_coeffs = 13;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  double log_floor = 1e-10;

  int window_samples() const;
  int sub_frame_samples() const;
  int hop_samples() const;
  int sub_frames_per_window() const;
  void validate() const;

  // stable hash of every field; keys feature-cache entries and checkpoints
  uint64_t hash() const;
};

// MFCC matrix of one analysis window: rows are sub-frames, columns cepstral
// coefficients. Times are relative to the owning waveform.
struct MfccWindow {
  Matd coeffs;  // [n_subframes x n_coeffs]
  double start_time_s = 0.0;
  double end_time_s = 0.0;
};

// mel <-> Hz (HTK convention)
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filterbank evaluated at the one-sided FFT bin frequencies.
// Row m holds filter m's weights over bins 0..fft_size/2.
Matd mel_filterbank(const MfccConfig &cfg);

// In-place iterative radix-2 FFT over interleaved (re, im) pairs.
void fft_radix2(std::vector<double> &re, std::vector<double> &im);

// MFCCs of one window of samples. Rejects non-finite input.
MfccWindow compute_mfcc(std::span<const float> window_samples, int sample_rate_hz,
                        const MfccConfig &cfg);

}  // namespace tfg::audio

#endif  // TFG_AUDIO_MFCC_HPP_
