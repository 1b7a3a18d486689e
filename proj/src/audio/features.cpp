// audio/features.cpp

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

#include "tfg/audio/features.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace tfg::audio {

void Waveform::validate() const {
  TFG_CHECK(sample_rate_hz > 0, "waveform sample rate must be positive");
  for (float s : samples) TFG_CHECK(std::isfinite(s), "non-finite waveform sample");
}

std::vector<SampleRange> slice_windows(const Waveform &w, double window_ms, double stride_ms) {
  w.validate();
  TFG_CHECK(stride_ms > 0, "stride must be positive");
  const int64_t wlen = std::llround(window_ms * w.sample_rate_hz / 1000.0);
  const int64_t stride = std::llround(stride_ms * w.sample_rate_hz / 1000.0);
  TFG_CHECK(wlen > 0 && stride > 0, "window and stride must span at least one sample");
  const int64_t n = int64_t(w.samples.size());
  if (n < wlen) {
    throw Error(strcat_msg("clip too short: ", n, " samples (", w.duration_ms(),
                           " ms) below one window of ", wlen, " samples (", window_ms, " ms)"));
  }
  const int64_t count = (n - wlen) / stride + 1;
  std::vector<SampleRange> ranges(static_cast<size_t>(count));
  for (int64_t i = 0; i < count; ++i) {
    ranges[size_t(i)] = SampleRange{i * stride, i * stride + wlen};
  }
  return ranges;
}

MfccSequence featurize_clip(const Waveform &w, double video_fps, const MfccConfig &cfg) {
  TFG_CHECK(video_fps > 0, "fps must be positive");
  const double stride_ms = 1000.0 / video_fps;
  const auto ranges = slice_windows(w, cfg.window_ms, stride_ms);

  MfccSequence seq;
  seq.windows.reserve(ranges.size());
  for (const SampleRange &r : ranges) {
    std::span<const float> view(w.samples.data() + r.begin, size_t(r.end - r.begin));
    MfccWindow win = compute_mfcc(view, w.sample_rate_hz, cfg);
    win.start_time_s = double(r.begin) / w.sample_rate_hz;
    win.end_time_s = double(r.end) / w.sample_rate_hz;
    seq.windows.push_back(std::move(win));
  }
  return seq;
}

Matd FeatureNormStats::apply(const Matd &coeffs) const {
  TFG_CHECK(valid() && coeffs.cols() == mean.size(), "norm stats do not match coefficient count");
  Matd out = coeffs;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = (out.col(j).array() - mean(j)) / stddev(j);
  }
  return out;
}

FeatureNormStats compute_norm_stats(const std::vector<MfccSequence> &sequences) {
  TFG_CHECK(!sequences.empty() && !sequences.front().windows.empty(),
            "cannot compute norm stats over an empty corpus");
  const Eigen::Index n_coeffs = sequences.front().windows.front().coeffs.cols();
  Vecd sum = Vecd::Zero(n_coeffs), sum_sq = Vecd::Zero(n_coeffs);
  int64_t rows = 0;
  for (const MfccSequence &seq : sequences) {
    for (const MfccWindow &win : seq.windows) {
      TFG_CHECK(win.coeffs.cols() == n_coeffs, "inconsistent coefficient count in corpus");
      sum += win.coeffs.colwise().sum().transpose();
      sum_sq += win.coeffs.array().square().matrix().colwise().sum().transpose();
      rows += win.coeffs.rows();
    }
  }
  FeatureNormStats st;
  st.mean = sum / double(rows);
  st.stddev =
      ((sum_sq / double(rows)) - st.mean.cwiseProduct(st.mean)).cwiseMax(1e-12).cwiseSqrt();
  return st;
}

namespace {
constexpr uint32_t kCacheMagic = 0x464d4654u;  // "TFMF"
constexpr uint32_t kCacheVersion = 1;
}  // namespace

void save_mfcc_sequence(const std::string &path, const MfccSequence &seq) {
  std::ofstream os(path, std::ios::binary);
  TFG_CHECK(os.good(), "cannot write feature cache: ", path);
  auto put_u32 = [&](uint32_t v) { os.write(reinterpret_cast<const char *>(&v), 4); };
  put_u32(kCacheMagic);
  put_u32(kCacheVersion);
  put_u32(uint32_t(seq.windows.size()));
  const uint32_t rows = seq.windows.empty() ? 0 : uint32_t(seq.windows.front().coeffs.rows());
  const uint32_t cols = seq.windows.empty() ? 0 : uint32_t(seq.windows.front().coeffs.cols());
  put_u32(rows);
  put_u32(cols);
  for (const MfccWindow &w : seq.windows) {
    TFG_CHECK(w.coeffs.rows() == rows && w.coeffs.cols() == cols,
              "ragged MFCC sequence cannot be cached");
    os.write(reinterpret_cast<const char *>(&w.start_time_s), 8);
    os.write(reinterpret_cast<const char *>(&w.end_time_s), 8);
    os.write(reinterpret_cast<const char *>(w.coeffs.data()),
             std::streamsize(sizeof(double)) * w.coeffs.size());
  }
  TFG_CHECK(os.good(), "short write: ", path);
}

MfccSequence load_mfcc_sequence(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  TFG_CHECK(in.good(), "cannot open feature cache: ", path);
  auto get_u32 = [&]() {
    uint32_t v = 0;
    in.read(reinterpret_cast<char *>(&v), 4);
    return v;
  };
  TFG_CHECK(get_u32() == kCacheMagic, "not a feature cache file: ", path);
  TFG_CHECK(get_u32() == kCacheVersion, "unsupported cache version: ", path);
  const uint32_t count = get_u32();
  const uint32_t rows = get_u32();
  const uint32_t cols = get_u32();
  MfccSequence seq;
  seq.windows.resize(count);
  for (uint32_t i = 0; i < count; ++i) {
    MfccWindow &w = seq.windows[i];
    in.read(reinterpret_cast<char *>(&w.start_time_s), 8);
    in.read(reinterpret_cast<char *>(&w.end_time_s), 8);
    w.coeffs.resize(rows, cols);
    in.read(reinterpret_cast<char *>(w.coeffs.data()),
            std::streamsize(sizeof(double)) * w.coeffs.size());
  }
  TFG_CHECK(in.good(), "truncated feature cache: ", path);
  return seq;
}

std::string cache_file_name(const std::string &clip_id, const MfccConfig &cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(cfg.hash()));
  return clip_id + "__" + buf + ".mfcc";
}

}  // namespace tfg::audio
