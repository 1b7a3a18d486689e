// tests/test_audio.cpp

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

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles/mfcc_oracle.hpp"
#include "tfg/audio/features.hpp"
#include "tfg/core/rng.hpp"

using namespace tfg;
using namespace tfg::audio;

namespace {

Waveform make_wave(int ms, int sr = 16000) {
  Waveform w;
  w.sample_rate_hz = sr;
  w.samples.assign(size_t(int64_t(ms) * sr / 1000), 0.0f);
  return w;
}

Waveform sine_wave(double freq, int ms, double amp = 0.5, int sr = 16000) {
  Waveform w = make_wave(ms, sr);
  for (size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = float(amp * std::sin(2.0 * 3.14159265358979 * freq * double(i) / sr));
  return w;
}

double rel_err(const Matd &a, const Matd &b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double denom = std::max({std::abs(a(i, j)), std::abs(b(i, j)), 1e-9});
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
    }
  return worst;
}

}  // namespace

TEST_CASE("slice_windows: count formula and error cases") {
  // 2000 ms / W=350 / S=40 -> floor((2000-350)/40)+1 = 42
  const auto r42 = slice_windows(make_wave(2000), 350, 40);
  CHECK(r42.size() == 42);
  for (const auto &r : r42) CHECK(r.end - r.begin == 5600);

  CHECK(slice_windows(make_wave(350), 350, 40).size() == 1);   // exact fit
  CHECK_THROWS_WITH_AS(static_cast<void>(slice_windows(make_wave(349), 350, 40)),
                       doctest::Contains("clip too short"), Error);
}

TEST_CASE("slice_windows: count formula property over random durations") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int w_ms = 50 + int(rng.uniform_int(500));
    const int s_ms = 1 + int(rng.uniform_int(100));
    const int t_ms = w_ms + int(rng.uniform_int(3000));
    const auto ranges = slice_windows(make_wave(t_ms), w_ms, s_ms);
    const int64_t expect = (int64_t(t_ms) - w_ms) / s_ms + 1;
    CHECK(int64_t(ranges.size()) == expect);
    // uniform stride, non-overlapping starts
    for (size_t i = 1; i < ranges.size(); ++i)
      CHECK(ranges[i].begin - ranges[i - 1].begin == int64_t(s_ms) * 16);
  }
}

TEST_CASE("compute_mfcc: all-zero input concentrates in coefficient 0") {
  MfccConfig cfg;
  const Waveform w = make_wave(350);
  const MfccWindow win = compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
  CHECK(win.coeffs.rows() == 33);
  CHECK(win.coeffs.cols() == 13);
  const double c0_expect = std::sqrt(1.0 / cfg.n_mels) * cfg.n_mels * std::log(cfg.log_floor);
  for (Eigen::Index sf = 0; sf < win.coeffs.rows(); ++sf) {
    CHECK(win.coeffs(sf, 0) == doctest::Approx(c0_expect).epsilon(1e-9));
    for (Eigen::Index j = 1; j < win.coeffs.cols(); ++j)
      CHECK(std::abs(win.coeffs(sf, j)) < 1e-9);
  }
}

TEST_CASE("compute_mfcc: matches the brute-force oracle on a 1 kHz sine") {
  MfccConfig cfg;
  const Waveform w = sine_wave(1000.0, 350);
  const MfccWindow win = compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
  const Matd oracle = testing::mfcc_oracle(std::span<const float>(w.samples), cfg);
  CHECK(rel_err(win.coeffs, oracle) < 1e-6);
}

TEST_CASE("compute_mfcc: oracle equivalence on random signals") {
  MfccConfig cfg;
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    Waveform w = make_wave(350);
    for (auto &s : w.samples) s = float(rng.uniform(-0.8, 0.8));
    const MfccWindow win = compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
    const Matd oracle = testing::mfcc_oracle(std::span<const float>(w.samples), cfg);
    CHECK(rel_err(win.coeffs, oracle) < 1e-6);
  }
}

TEST_CASE("compute_mfcc: NaN rejected, determinism holds") {
  MfccConfig cfg;
  Waveform w = sine_wave(500.0, 350);
  const MfccWindow a = compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
  const MfccWindow b = compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
  CHECK((a.coeffs - b.coeffs).norm() == 0.0);

  w.samples[100] = std::nanf("");
  CHECK_THROWS(static_cast<void>(compute_mfcc(std::span<const float>(w.samples), 16000, cfg)));
}

TEST_CASE("compute_mfcc: global gain shifts only coefficient 0") {
  MfccConfig cfg;
  Rng rng(31);
  Waveform w = make_wave(350);
  for (auto &s : w.samples) s = float(rng.uniform(-0.4, 0.4));
  Waveform w2 = w;
  for (auto &s : w2.samples) s *= 2.0f;

  const MfccWindow a = compute_mfcc(std::span<const float>(w.samples), 16000, cfg);
  const MfccWindow b = compute_mfcc(std::span<const float>(w2.samples), 16000, cfg);
  // log power doubles by 2 ln 2 per mel bin; DCT maps a constant to coeff 0
  const double shift = std::sqrt(1.0 / cfg.n_mels) * cfg.n_mels * 2.0 * std::log(2.0);
  for (Eigen::Index sf = 0; sf < a.coeffs.rows(); ++sf) {
    CHECK(b.coeffs(sf, 0) - a.coeffs(sf, 0) == doctest::Approx(shift).epsilon(1e-6));
    for (Eigen::Index j = 1; j < a.coeffs.cols(); ++j)
      CHECK(std::abs(b.coeffs(sf, j) - a.coeffs(sf, j)) < 1e-6);
  }
}

TEST_CASE("featurize_clip: one window per frame at the video rate") {
  MfccConfig cfg;
  const Waveform w = sine_wave(700.0, 2000);
  const MfccSequence seq = featurize_clip(w, 25.0, cfg);
  CHECK(seq.length() == 42);
  for (int i = 1; i < seq.length(); ++i) {
    const double stride =
        seq.windows[size_t(i)].start_time_s - seq.windows[size_t(i - 1)].start_time_s;
    CHECK(stride == doctest::Approx(0.04).epsilon(1e-12));
  }
  const MfccSequence seq2 = featurize_clip(w, 25.0, cfg);
  for (int i = 0; i < seq.length(); ++i)
    CHECK((seq.windows[size_t(i)].coeffs - seq2.windows[size_t(i)].coeffs).norm() == 0.0);
}

TEST_CASE("norm stats: zero mean unit variance after apply") {
  MfccConfig cfg;
  Rng rng(77);
  std::vector<MfccSequence> seqs;
  for (int c = 0; c < 3; ++c) {
    Waveform w = make_wave(1000);
    for (auto &s : w.samples) s = float(rng.uniform(-0.5, 0.5));
    seqs.push_back(featurize_clip(w, 25.0, cfg));
  }
  const FeatureNormStats st = compute_norm_stats(seqs);
  Vecd mean = Vecd::Zero(cfg.n_coeffs), var = Vecd::Zero(cfg.n_coeffs);
  int64_t rows = 0;
  for (const auto &s : seqs)
    for (const auto &w : s.windows) {
      const Matd n = st.apply(w.coeffs);
      mean += n.colwise().sum().transpose();
      var += n.array().square().matrix().colwise().sum().transpose();
      rows += n.rows();
    }
  for (Eigen::Index j = 0; j < cfg.n_coeffs; ++j) {
    CHECK(mean(j) / double(rows) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(var(j) / double(rows) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("feature cache: round trip") {
  MfccConfig cfg;
  const Waveform w = sine_wave(333.0, 600);
  const MfccSequence seq = featurize_clip(w, 25.0, cfg);
  const std::string path =
      (std::filesystem::temp_directory_path() / cache_file_name("clip01", cfg)).string();
  save_mfcc_sequence(path, seq);
  const MfccSequence back = load_mfcc_sequence(path);
  REQUIRE(back.length() == seq.length());
  for (int i = 0; i < seq.length(); ++i) {
    CHECK(back.windows[size_t(i)].start_time_s == seq.windows[size_t(i)].start_time_s);
    CHECK((back.windows[size_t(i)].coeffs - seq.windows[size_t(i)].coeffs).norm() == 0.0);
  }
}
