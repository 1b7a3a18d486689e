// data/synthetic.cpp

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

#include "tfg/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "tfg/io/archive.hpp"
#include "tfg/io/config_json.hpp"

namespace tfg::data {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTau = 2.0 * kPi;

// low-discrepancy pseudo-value in [0,1), fixed per (word, slot)
double word_frac(int word, int slot, int salt) {
  const double x = double(word * 31 + slot * 17 + salt * 7 + 3) * 0.6180339887498949;
  return x - std::floor(x);
}

struct Rgb {
  uint8_t r, g, b;
};

Rgb to_u8(double r, double g, double b) {
  auto q = [](double v) {
    return uint8_t(std::lround(std::clamp(v, -1.0, 1.0) * 127.5 + 127.5));
  };
  return Rgb{q(r), q(g), q(b)};
}

struct Canvas {
  std::vector<uint8_t> px;  // interleaved RGB
  int h, w;
  Canvas(int h_, int w_) : px(size_t(h_) * w_ * 3), h(h_), w(w_) {}
  void set(int y, int x, Rgb c) {
    const size_t o = (size_t(y) * w + x) * 3;
    px[o] = c.r;
    px[o + 1] = c.g;
    px[o + 2] = c.b;
  }
  Rgb get(int y, int x) const {
    const size_t o = (size_t(y) * w + x) * 3;
    return Rgb{px[o], px[o + 1], px[o + 2]};
  }
  void blend(int y, int x, Rgb c, double a) {
    if (y < 0 || y >= h || x < 0 || x >= w || a <= 0) return;
    if (a >= 1) {
      set(y, x, c);
      return;
    }
    const Rgb old = get(y, x);
    auto mix = [a](uint8_t o, uint8_t n) {
      return uint8_t(std::lround(double(o) * (1 - a) + double(n) * a));
    };
    set(y, x, Rgb{mix(old.r, c.r), mix(old.g, c.g), mix(old.b, c.b)});
  }
  void fill(Rgb c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) set(y, x, c);
  }
  void ellipse(double cx, double cy, double rx, double ry, Rgb c) {
    const int y0 = std::max(0, int(cy - ry) - 1), y1 = std::min(h - 1, int(cy + ry) + 1);
    const int x0 = std::max(0, int(cx - rx) - 1), x1 = std::min(w - 1, int(cx + rx) + 1);
    const double edge = std::min(rx, ry);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        const double d = (std::sqrt(dx * dx + dy * dy) - 1.0) * edge;
        blend(y, x, c, std::clamp(0.5 - d, 0.0, 1.0));
      }
    }
  }
  void rect(int y0, int x0, int hh, int ww, Rgb c) {
    for (int y = std::max(0, y0); y < std::min(h, y0 + hh); ++y)
      for (int x = std::max(0, x0); x < std::min(w, x0 + ww); ++x) set(y, x, c);
  }
};

struct ClipIdentity {
  double face_cx, face_cy, face_rx, face_ry;
  double eye_dx, eye_r;
  Rgb skin, eyes, bg, lips, mouth_dark, nose;
};

ClipIdentity draw_params(const SyntheticAvatarConfig &cfg, Rng &rng) {
  // face is a tall close-up oval whose chin covers the whole mouth box, and
  // the background stays above the dark-luma threshold the aperture detector
  // uses; only the mouth opening reads as dark inside the box
  ClipIdentity id;
  id.face_cx = cfg.mouth_center_x + rng.uniform(-2.0, 2.0);
  id.face_cy = 64.0 + rng.uniform(-1.0, 1.0);
  id.face_rx = 45.0 + rng.uniform(0.0, 4.0);
  id.face_ry = 59.0 + rng.uniform(0.0, 4.0);
  id.eye_dx = 16.0 + rng.uniform(0.0, 4.0);
  id.eye_r = 3.5 + rng.uniform(0.0, 2.0);
  const double skin_r = 0.30 + rng.uniform(0.0, 0.30);
  id.skin = to_u8(skin_r, skin_r - 0.14 - rng.uniform(0.0, 0.06), skin_r - 0.30);
  id.eyes = to_u8(-0.75, -0.75, -0.72);
  const double bg = -0.42 + rng.uniform(0.0, 0.10);
  id.bg = to_u8(bg, bg, bg + 0.04);
  id.lips = to_u8(0.05, -0.45, -0.40);
  id.mouth_dark = to_u8(-0.88, -0.92, -0.90);
  id.nose = to_u8(skin_r - 0.12, skin_r - 0.24, skin_r - 0.40);
  return id;
}

Canvas render_frame(const SyntheticAvatarConfig &cfg, const ClipIdentity &id, int aperture_px,
                    double dx, double dy) {
  Canvas cv(kFrameSize, kFrameSize);
  cv.fill(id.bg);
  cv.ellipse(id.face_cx + dx, id.face_cy + dy, id.face_rx, id.face_ry, id.skin);
  cv.ellipse(id.face_cx + dx - id.eye_dx, 50.0 + dy, id.eye_r, id.eye_r, id.eyes);
  cv.ellipse(id.face_cx + dx + id.eye_dx, 50.0 + dy, id.eye_r, id.eye_r, id.eyes);
  cv.rect(70 + int(std::lround(dy)), int(std::lround(id.face_cx + dx)) - 1, 10, 2, id.nose);

  const int mx = cfg.mouth_center_x + int(std::lround(dx));
  const int my = cfg.mouth_center_y + int(std::lround(dy));
  const int mw = cfg.mouth_width;
  cv.rect(my - 1, mx - mw / 2, 2, mw, id.lips);  // closed-lip line
  if (aperture_px > 0) {
    cv.rect(my - aperture_px / 2, mx - mw / 2 + 2, aperture_px, mw - 4, id.mouth_dark);
  }
  return cv;
}

std::vector<float> synth_waveform(const SyntheticAvatarConfig &cfg, int word_id,
                                  const WordEnvelope &env, int64_t n_samples, Rng &rng) {
  // two word-identifying carriers plus a bed of detuned partials; the
  // per-clip detunes put beat periods near the window stride, so successive
  // MFCC windows fluctuate the way real speech spectra do
  const double f1 = 250.0 + 110.0 * word_id;
  const double f2 = 900.0 + 130.0 * word_id;
  const double ph1 = rng.uniform(0.0, kTau);
  const double ph2 = rng.uniform(0.0, kTau);

  constexpr int kPartials = 6;
  double pf[kPartials], pa[kPartials], pp[kPartials];
  for (int k = 0; k < kPartials; ++k) {
    const double base = (k % 2 == 0) ? f1 : f2;
    const double mult = 1.0 + 0.5 * (k / 2 + 1);
    pf[k] = base * mult * (1.0 + rng.uniform(-0.012, 0.012)) + rng.uniform(1.5, 6.5);
    pa[k] = 0.10 / (1.0 + 0.5 * k);
    pp[k] = rng.uniform(0.0, kTau);
  }

  std::vector<float> samples(static_cast<size_t>(n_samples));
  const int sr = cfg.mfcc.sample_rate_hz;
  for (int64_t i = 0; i < n_samples; ++i) {
    const double tau = double(i) / sr;
    double s = 0.34 * std::sin(kTau * f1 * tau + ph1) + 0.22 * std::sin(kTau * f2 * tau + ph2);
    for (int k = 0; k < kPartials; ++k) s += pa[k] * std::sin(kTau * pf[k] * tau + pp[k]);
    samples[size_t(i)] = float(env(tau) * s);
  }
  return samples;
}

}  // namespace

void SyntheticAvatarConfig::validate() const {
  TFG_CHECK(vocabulary_size >= 2, "vocabulary_size must be >= 2, got ", vocabulary_size);
  TFG_CHECK(clip_frames >= 4, "clip_frames must be >= 4, got ", clip_frames);
  TFG_CHECK(fps > 0, "fps must be positive");
  TFG_CHECK(train_clips >= 0 && test_clips >= 0, "negative clip counts");
  TFG_CHECK(aperture_gain_px > 0, "aperture gain must be positive");
  TFG_CHECK(pose_amplitude_px >= 0 && pose_amplitude_px <= 8.0,
            "pose amplitude must stay within [0, 8] px");
  TFG_CHECK(mouth_width >= 8, "mouth too narrow to render");
  mfcc.validate();
}

uint64_t SyntheticAvatarConfig::hash() const {
  uint64_t h = mfcc.hash();
  h = derive_seed(h, strcat_msg("synth/", vocabulary_size, "/", clip_frames, "/", fps, "/",
                                train_clips, "/", test_clips, "/", rng_seed, "/", mouth_center_x,
                                "/", mouth_center_y, "/", mouth_width, "/", aperture_gain_px,
                                "/", pose_amplitude_px));
  return h;
}

MouthBox mouth_box(const SyntheticAvatarConfig &cfg) {
  MouthBox box;
  box.size = 48;
  box.x0 = std::clamp(cfg.mouth_center_x - box.size / 2, 0, kFrameSize - box.size);
  box.y0 = std::clamp(cfg.mouth_center_y - box.size / 2, 0, kFrameSize - box.size);
  return box;
}

WordEnvelope WordEnvelope::make(const SyntheticAvatarConfig &cfg, int word_id, double duration_s,
                                Rng &jitter_rng) {
  TFG_CHECK(word_id >= 0 && word_id < cfg.vocabulary_size, "word_id ", word_id,
            " out of range [0, ", cfg.vocabulary_size, ")");
  WordEnvelope env;
  env.word_id = word_id;
  if (word_id == 0) return env;  // silence: zero envelope

  env.base = 0.12;
  const int syllables = 1 + (word_id - 1) % 3;
  const double span0 = 0.08 * duration_s;
  const double span = 0.84 * duration_s;
  for (int i = 0; i < syllables; ++i) {
    const double jc = jitter_rng.uniform(-0.02, 0.02) * duration_s;
    const double ja = 1.0 + jitter_rng.uniform(-0.06, 0.06);
    env.centers.push_back(span0 + span * (i + 0.5) / syllables + jc);
    env.sigmas.push_back(duration_s * (0.055 + 0.045 * word_frac(word_id, i, 1)));
    env.amps.push_back((0.52 + 0.36 * word_frac(word_id, i, 2)) * ja);
  }
  return env;
}

double WordEnvelope::operator()(double tau) const {
  if (word_id == 0) return 0.0;
  double e = base;
  for (size_t i = 0; i < centers.size(); ++i) {
    const double d = (tau - centers[i]) / sigmas[i];
    e += amps[i] * std::exp(-0.5 * d * d);
  }
  return std::min(e, 1.0);
}

TalkingFaceSample synth_sample(const SyntheticAvatarConfig &cfg, int word_id, uint64_t seed,
                               std::vector<float> *waveform_out) {
  cfg.validate();
  TFG_CHECK(word_id >= 0 && word_id < cfg.vocabulary_size, "word_id ", word_id,
            " out of range [0, ", cfg.vocabulary_size, ")");

  const int K = cfg.clip_frames;
  const int sr = cfg.mfcc.sample_rate_hz;
  const int64_t stride = std::llround(sr / cfg.fps);
  const int64_t wlen = cfg.mfcc.window_samples();
  const int64_t n_samples = (K - 1) * stride + wlen;
  const double duration_s = double(n_samples) / sr;

  // draw order is fixed: envelope jitter, carrier phases, identity params
  Rng rng(derive_seed(cfg.rng_seed, strcat_msg("clip/", word_id, "/", seed)));
  const WordEnvelope env = WordEnvelope::make(cfg, word_id, duration_s, rng);

  audio::Waveform wav;
  wav.sample_rate_hz = sr;
  wav.samples = synth_waveform(cfg, word_id, env, n_samples, rng);
  if (waveform_out != nullptr) *waveform_out = wav.samples;

  TalkingFaceSample s;
  s.audio_features = audio::featurize_clip(wav, cfg.fps, cfg.mfcc);
  TFG_CHECK(s.audio_features.length() == K, "window count ", s.audio_features.length(),
            " does not match clip_frames ", K);

  const ClipIdentity ident = draw_params(cfg, rng);

  // head motion: speakers nod with speech emphasis, so the vertical bob
  // follows the loudness envelope (with a per-clip gain), plus a small slow
  // sway whose phase the audio does not reveal
  const double nod_gain = rng.uniform(0.8, 1.0);
  const double pose_phase_x = rng.uniform(0.0, kTau);
  const double pose_phase_y = rng.uniform(0.0, kTau);
  const double pose_period = duration_s * rng.uniform(1.2, 2.0);
  const double amp = cfg.pose_amplitude_px;

  s.frames.reserve(size_t(K));
  s.landmarks.reserve(size_t(K));
  for (int t = 0; t < K; ++t) {
    // frame content is pinned to the midpoint of audio window t, which keeps
    // the middle-frame pairing exact for this corpus
    const double mid_tau = (double(t) * stride + wlen * 0.5) / sr;
    const double aperture = cfg.aperture_gain_px * env(mid_tau);
    const double dy = amp * (0.75 * nod_gain * (env(mid_tau) - 0.5) +
                             0.25 * std::sin(kTau * mid_tau / pose_period + pose_phase_y));
    const double dx = 0.35 * amp * std::sin(kTau * mid_tau / pose_period + pose_phase_x);
    Canvas cv = render_frame(cfg, ident, int(std::lround(aperture)), dx, dy);
    s.frames.push_back(image_from_u8(cv.px, cv.h, cv.w));

    const double mx = cfg.mouth_center_x + std::lround(dx);
    const double my = cfg.mouth_center_y + std::lround(dy);
    Matd lm(4, 2);
    lm << mx - cfg.mouth_width / 2.0, my,  //
        mx + cfg.mouth_width / 2.0, my,    //
        mx, my - aperture / 2.0,           //
        mx, my + aperture / 2.0;
    s.landmarks.push_back(lm);
  }
  s.has_landmarks = true;
  s.identity = s.frames.front();
  s.word_label = word_id;
  s.has_label = true;
  s.fps = cfg.fps;
  s.id = strcat_msg("synth_w", word_id, "_s", seed);
  return s;
}

Vecd envelope_from_landmarks(const TalkingFaceSample &sample, double aperture_gain_px) {
  TFG_CHECK(sample.has_landmarks, "sample has no landmarks");
  Vecd env(sample.length());
  for (int t = 0; t < sample.length(); ++t) {
    const Matd &lm = sample.landmarks[size_t(t)];
    env(t) = (lm(3, 1) - lm(2, 1)) / aperture_gain_px;
  }
  return env;
}

int write_synthetic_corpus(const SyntheticAvatarConfig &cfg, const std::string &archive_path) {
  cfg.validate();
  ArchiveWriter ar(archive_path);

  nlohmann::json manifest;
  manifest["format"] = "tfg-synthetic-corpus";
  manifest["version"] = 1;
  manifest["config"] = cfg;
  nlohmann::json clips = nlohmann::json::array();

  auto emit = [&](const std::string &split, int index) {
    const int word = index % cfg.vocabulary_size;
    const uint64_t seed = derive_seed(cfg.rng_seed, strcat_msg(split, "/", index));
    std::vector<float> waveform;
    TalkingFaceSample s = synth_sample(cfg, word, seed, &waveform);

    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "%s_%05d", split.c_str(), index);
    const std::string id = idbuf;
    const std::string base = strcat_msg("clips/", id, "/");

    std::vector<uint8_t> frames_u8;
    frames_u8.reserve(size_t(s.length()) * kFrameSize * kFrameSize * 3);
    for (const Image &f : s.frames) {
      std::vector<uint8_t> u8 = image_to_u8(f);
      frames_u8.insert(frames_u8.end(), u8.begin(), u8.end());
    }
    ar.add_bytes(base + "frames.u8", frames_u8);

    // raw waveform; MFCC is recomputed at load so features always match the
    // loading configuration
    ar.add(base + "audio.f32", waveform.data(), waveform.size() * sizeof(float));

    std::vector<float> lm_flat;
    lm_flat.reserve(size_t(s.length()) * 8);
    for (const Matd &lm : s.landmarks)
      for (int p = 0; p < 4; ++p)
        for (int d = 0; d < 2; ++d) lm_flat.push_back(float(lm(p, d)));
    ar.add(base + "landmarks.f32", lm_flat.data(), lm_flat.size() * sizeof(float));

    nlohmann::json c;
    c["id"] = id;
    c["word_id"] = word;
    c["split"] = split;
    c["frames"] = s.length();
    c["fps"] = cfg.fps;
    clips.push_back(c);
  };

  for (int i = 0; i < cfg.train_clips; ++i) emit("train", i);
  for (int i = 0; i < cfg.test_clips; ++i) emit("test", i);

  manifest["clips"] = clips;
  ar.add_string("manifest.json", manifest.dump(2));
  ar.finish();
  return cfg.train_clips + cfg.test_clips;
}

}  // namespace tfg::data
