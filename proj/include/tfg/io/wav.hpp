// io/wav.hpp

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

#ifndef TFG_IO_WAV_HPP_
#define TFG_IO_WAV_HPP_

#include <string>
#include <vector>

namespace tfg {

struct WavData {
  std::vector<float> samples;  // mono, [-1, 1]
  int sample_rate_hz = 0;
};

// Little-endian PCM WAV. Accepts 16-bit PCM and 32-bit float; multichannel
// input is averaged down to mono.
WavData read_wav(const std::string &path);

// Writes mono 16-bit PCM.
void write_wav(const std::string &path, const std::vector<float> &samples, int sample_rate_hz);

// Linear resampler (load-time normalization to the configured feature rate).
std::vector<float> resample_linear(const std::vector<float> &in, int from_hz, int to_hz);

}  // namespace tfg

#endif  // TFG_IO_WAV_HPP_
