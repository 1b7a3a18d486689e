// audio/mfcc.cpp

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

#include "tfg/audio/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace tfg::audio {

namespace {
constexpr double kPi = 3.14159265358979323846;

uint64_t fnv1a_mix(uint64_t h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}
uint64_t fnv1a_mix(uint64_t h, double d) {
  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(d));
  std::memcpy(&bits, &d, sizeof(bits));
  return fnv1a_mix(h, bits);
}
}  // namespace

int MfccConfig::window_samples() const {
  return int(std::llround(window_ms * sample_rate_hz / 1000.0));
}
int MfccConfig::sub_frame_samples() const {
  return int(std::llround(sub_frame_ms * sample_rate_hz / 1000.0));
}
int MfccConfig::hop_samples() const {
  return int(std::llround(hop_ms * sample_rate_hz / 1000.0));
}
int MfccConfig::sub_frames_per_window() const {
  return (window_samples() - sub_frame_samples()) / hop_samples() + 1;
}

void MfccConfig::validate() const {
  TFG_CHECK(sample_rate_hz > 0, "sample_rate_hz must be positive");
  TFG_CHECK(sub_frame_ms > 0 && hop_ms > 0, "sub-frame and hop must be positive");
  TFG_CHECK(sub_frame_ms < window_ms, "sub-frame length must be below window length");
  TFG_CHECK(fft_size > 0 && (fft_size & (fft_size - 1)) == 0, "fft_size must be a power of two");
  TFG_CHECK(fft_size >= sub_frame_samples(), "fft_size ", fft_size, " below sub-frame length ",
            sub_frame_samples());
  TFG_CHECK(n_mels >= 2 && n_coeffs >= 1 && n_coeffs <= n_mels, "bad filterbank sizes");
  TFG_CHECK(fmax_hz > fmin_hz && fmax_hz <= sample_rate_hz / 2.0, "bad mel band edges");
  TFG_CHECK(log_floor > 0, "log_floor must be positive");
}

uint64_t MfccConfig::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a_mix(h, uint64_t(sample_rate_hz));
  h = fnv1a_mix(h, window_ms);
  h = fnv1a_mix(h, sub_frame_ms);
  h = fnv1a_mix(h, hop_ms);
  h = fnv1a_mix(h, uint64_t(fft_size));
  h = fnv1a_mix(h, uint64_t(n_mels));
  h = fnv1a_mix(h, uint64_t(n_coeffs));
  h = fnv1a_mix(h, fmin_hz);
  h = fnv1a_mix(h, fmax_hz);
  h = fnv1a_mix(h, log_floor);
  return h;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matd mel_filterbank(const MfccConfig &cfg) {
  const int bins = cfg.fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.fmin_hz);
  const double mel_hi = hz_to_mel(cfg.fmax_hz);
  Vecd edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges(i) = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / double(cfg.n_mels + 1));

  Matd fb = Matd::Zero(cfg.n_mels, bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges(m), mid = edges(m + 1), hi = edges(m + 2);
    for (int k = 0; k < bins; ++k) {
      const double f = double(k) * cfg.sample_rate_hz / cfg.fft_size;
      double w = 0.0;
      if (f > lo && f < hi) {
        w = (f <= mid) ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
      }
      fb(m, k) = w;
    }
  }
  return fb;
}

void fft_radix2(std::vector<double> &re, std::vector<double> &im) {
  const size_t n = re.size();
  TFG_CHECK(n == im.size() && n > 0 && (n & (n - 1)) == 0, "fft size must be a power of two");

  // bit reversal
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / double(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (size_t k = 0; k < len / 2; ++k) {
        const double ur = re[i + k], ui = im[i + k];
        const double vr = re[i + k + len / 2] * cr - im[i + k + len / 2] * ci;
        const double vi = re[i + k + len / 2] * ci + im[i + k + len / 2] * cr;
        re[i + k] = ur + vr;
        im[i + k] = ui + vi;
        re[i + k + len / 2] = ur - vr;
        im[i + k + len / 2] = ui - vi;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
}

MfccWindow compute_mfcc(std::span<const float> window_samples, int sample_rate_hz,
                        const MfccConfig &cfg) {
  cfg.validate();
  TFG_CHECK(sample_rate_hz == cfg.sample_rate_hz, "sample rate ", sample_rate_hz,
            " does not match config rate ", cfg.sample_rate_hz, "; resample on load");
  const int wlen = cfg.window_samples();
  TFG_CHECK(int(window_samples.size()) == wlen, "window has ", window_samples.size(),
            " samples, expected ", wlen);
  for (float s : window_samples)
    TFG_CHECK(std::isfinite(s), "non-finite sample in MFCC input");

  const int sub = cfg.sub_frame_samples();
  const int hop = cfg.hop_samples();
  const int n_sub = cfg.sub_frames_per_window();
  const int bins = cfg.fft_size / 2 + 1;

  // periodic Hann
  Vecd hann(sub);
  for (int i = 0; i < sub; ++i) hann(i) = 0.5 - 0.5 * std::cos(2.0 * kPi * i / sub);

  const Matd fb = mel_filterbank(cfg);

  // orthonormal DCT-II basis, n_coeffs x n_mels
  Matd dct(cfg.n_coeffs, cfg.n_mels);
  for (int j = 0; j < cfg.n_coeffs; ++j) {
    const double s = (j == 0) ? std::sqrt(1.0 / cfg.n_mels) : std::sqrt(2.0 / cfg.n_mels);
    for (int m = 0; m < cfg.n_mels; ++m)
      dct(j, m) = s * std::cos(kPi * j * (m + 0.5) / cfg.n_mels);
  }

  MfccWindow out;
  out.coeffs.resize(n_sub, cfg.n_coeffs);
  std::vector<double> re(size_t(cfg.fft_size)), im(size_t(cfg.fft_size));
  for (int sf = 0; sf < n_sub; ++sf) {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    const int off = sf * hop;
    for (int i = 0; i < sub; ++i) re[size_t(i)] = double(window_samples[size_t(off + i)]) * hann(i);
    fft_radix2(re, im);

    Vecd power(bins);
    for (int k = 0; k < bins; ++k) power(k) = re[size_t(k)] * re[size_t(k)] + im[size_t(k)] * im[size_t(k)];

    Vecd mel_log = (fb * power).cwiseMax(cfg.log_floor).array().log().matrix();
    out.coeffs.row(sf) = (dct * mel_log).transpose();
  }
  TFG_CHECK(out.coeffs.allFinite(), "non-finite MFCC output");
  return out;
}

}  // namespace tfg::audio
