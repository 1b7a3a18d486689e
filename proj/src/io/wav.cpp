// io/wav.cpp

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

#include "tfg/io/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tfg/core/common.hpp"

namespace tfg {

namespace {

uint32_t rd_u32(const uint8_t *p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}
uint16_t rd_u16(const uint8_t *p) { return uint16_t(p[0] | p[1] << 8); }

void wr_u32(std::ostream &os, uint32_t v) {
  uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
  os.write(reinterpret_cast<const char *>(b), 4);
}
void wr_u16(std::ostream &os, uint16_t v) {
  uint8_t b[2] = {uint8_t(v), uint8_t(v >> 8)};
  os.write(reinterpret_cast<const char *>(b), 2);
}

}  // namespace

WavData read_wav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  TFG_CHECK(in.good(), "cannot open WAV file: ", path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  TFG_CHECK(buf.size() >= 44, "WAV too small: ", path);
  TFG_CHECK(std::memcmp(buf.data(), "RIFF", 4) == 0 && std::memcmp(buf.data() + 8, "WAVE", 4) == 0,
            "not a RIFF/WAVE file: ", path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const char *id = reinterpret_cast<const char *>(buf.data() + pos);
    const uint32_t len = rd_u32(buf.data() + pos + 4);
    const size_t body = pos + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      TFG_CHECK(len >= 16 && body + 16 <= buf.size(), "truncated fmt chunk: ", path);
      format = rd_u16(buf.data() + body);
      channels = rd_u16(buf.data() + body + 2);
      sample_rate = rd_u32(buf.data() + body + 4);
      bits = rd_u16(buf.data() + body + 14);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = std::min<size_t>(len, buf.size() - body);
    }
    pos = body + len + (len & 1);  // chunks are word-aligned
  }
  TFG_CHECK(data_off != 0, "WAV has no data chunk: ", path);
  TFG_CHECK(channels >= 1, "WAV has zero channels: ", path);
  TFG_CHECK(sample_rate > 0, "WAV has zero sample rate: ", path);

  WavData out;
  out.sample_rate_hz = int(sample_rate);
  const size_t bytes_per = size_t(bits) / 8;
  TFG_CHECK(bytes_per > 0, "bad bit depth ", bits, ": ", path);
  const size_t frames = data_len / (bytes_per * channels);
  out.samples.resize(frames);

  if (format == 1 && bits == 16) {
    for (size_t i = 0; i < frames; ++i) {
      double acc = 0;
      for (uint16_t ch = 0; ch < channels; ++ch) {
        const uint8_t *p = buf.data() + data_off + (i * channels + ch) * 2;
        int16_t s = int16_t(rd_u16(p));
        acc += double(s) / 32768.0;
      }
      out.samples[i] = float(acc / channels);
    }
  } else if (format == 3 && bits == 32) {
    for (size_t i = 0; i < frames; ++i) {
      double acc = 0;
      for (uint16_t ch = 0; ch < channels; ++ch) {
        const uint8_t *p = buf.data() + data_off + (i * channels + ch) * 4;
        uint32_t u = rd_u32(p);
        float f;
        std::memcpy(&f, &u, 4);
        acc += double(f);
      }
      out.samples[i] = float(acc / channels);
    }
  } else {
    TFG_CHECK(false, "unsupported WAV encoding (format=", format, ", bits=", bits, "): ", path);
  }
  return out;
}

void write_wav(const std::string &path, const std::vector<float> &samples, int sample_rate_hz) {
  TFG_CHECK(sample_rate_hz > 0, "bad sample rate ", sample_rate_hz);
  std::ofstream os(path, std::ios::binary);
  TFG_CHECK(os.good(), "cannot write WAV file: ", path);
  const uint32_t data_len = uint32_t(samples.size() * 2);
  os.write("RIFF", 4);
  wr_u32(os, 36 + data_len);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  wr_u32(os, 16);
  wr_u16(os, 1);  // PCM
  wr_u16(os, 1);  // mono
  wr_u32(os, uint32_t(sample_rate_hz));
  wr_u32(os, uint32_t(sample_rate_hz) * 2);
  wr_u16(os, 2);
  wr_u16(os, 16);
  os.write("data", 4);
  wr_u32(os, data_len);
  for (float s : samples) {
    const float c = std::clamp(s, -1.0f, 1.0f);
    wr_u16(os, uint16_t(int16_t(std::lround(c * 32767.0f))));
  }
  TFG_CHECK(os.good(), "short write: ", path);
}

std::vector<float> resample_linear(const std::vector<float> &in, int from_hz, int to_hz) {
  TFG_CHECK(from_hz > 0 && to_hz > 0, "bad resample rates ", from_hz, " -> ", to_hz);
  if (from_hz == to_hz || in.empty()) return in;
  const size_t out_n = size_t(std::llround(double(in.size()) * to_hz / from_hz));
  std::vector<float> out(out_n);
  for (size_t i = 0; i < out_n; ++i) {
    const double src = double(i) * from_hz / to_hz;
    const size_t i0 = std::min<size_t>(size_t(src), in.size() - 1);
    const size_t i1 = std::min<size_t>(i0 + 1, in.size() - 1);
    const double f = src - double(i0);
    out[i] = float(double(in[i0]) * (1.0 - f) + double(in[i1]) * f);
  }
  return out;
}

}  // namespace tfg
