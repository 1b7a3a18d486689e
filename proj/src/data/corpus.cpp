// data/corpus.cpp

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

#include "tfg/data/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "tfg/io/archive.hpp"
#include "tfg/io/config_json.hpp"
#include "tfg/io/png_io.hpp"
#include "tfg/io/wav.hpp"

namespace fs = std::filesystem;

namespace tfg::data {

void TalkingFaceSample::validate() const {
  TFG_CHECK(!frames.empty(), "sample has no frames: ", id);
  TFG_CHECK(audio_features.length() == length(), "sample ", id, ": ", audio_features.length(),
            " audio windows vs ", length(), " frames");
  TFG_CHECK(identity.c == 3 && identity.h == kFrameSize && identity.w == kFrameSize,
            "identity image must be ", kFrameSize, "x", kFrameSize, "x3: ", id);
  TFG_CHECK(in_unit_range(identity), "identity pixels out of [-1,1]: ", id);
  for (const Image &f : frames) {
    TFG_CHECK(f.c == 3 && f.h == kFrameSize && f.w == kFrameSize, "bad frame shape: ", id);
    TFG_CHECK(in_unit_range(f), "frame pixels out of [-1,1]: ", id);
  }
  if (has_landmarks) {
    TFG_CHECK(int(landmarks.size()) == length(), "landmark count mismatch: ", id);
  }
  if (has_label) {
    TFG_CHECK(word_label >= 0, "negative word label: ", id);
  }
}

Image crop_resize_face(const Image &image, const BoundingBox &bbox) {
  TFG_CHECK(bbox.width > 0 && bbox.height > 0, "degenerate bbox ", bbox.width, "x", bbox.height);
  TFG_CHECK(bbox.x0 >= 0 && bbox.y0 >= 0 && bbox.x0 + bbox.width <= image.w &&
                bbox.y0 + bbox.height <= image.h,
            "bbox [", bbox.x0, ",", bbox.y0, " ", bbox.width, "x", bbox.height,
            "] exceeds image ", image.w, "x", image.h);
  Image crop(image.c, bbox.height, bbox.width);
  for (int ch = 0; ch < image.c; ++ch)
    for (int y = 0; y < bbox.height; ++y)
      for (int x = 0; x < bbox.width; ++x)
        crop.at(ch, y, x) = image.at(ch, bbox.y0 + y, bbox.x0 + x);
  return bilinear_resize(crop, kFrameSize, kFrameSize);
}

std::vector<int> align_middle_frame(int frame_count, double fps,
                                    const std::vector<audio::SampleRange> &windows,
                                    int sample_rate_hz) {
  TFG_CHECK(frame_count > 0 && fps > 0 && sample_rate_hz > 0, "bad alignment inputs");
  const double video_end_s = frame_count / fps;
  std::vector<int> out;
  out.reserve(windows.size());
  for (const audio::SampleRange &r : windows) {
    const double mid_s = 0.5 * double(r.begin + r.end) / sample_rate_hz;
    TFG_CHECK(mid_s >= 0.0 && mid_s <= video_end_s, "audio window midpoint ", mid_s,
              "s outside video span [0, ", video_end_s, "s]");
    // frame i has midpoint (i + 0.5) / fps; nearest, ties to the earlier one
    const double pos = mid_s * fps - 0.5;
    int lo = std::clamp(int(std::floor(pos)), 0, frame_count - 1);
    int hi = std::min(lo + 1, frame_count - 1);
    const double d_lo = std::abs(pos - lo), d_hi = std::abs(hi - pos);
    out.push_back(d_lo <= d_hi ? lo : hi);
  }
  return out;
}

Image select_identity(const TalkingFaceSample &sample, IdentityMode mode, uint64_t seed) {
  TFG_CHECK(!sample.frames.empty(), "cannot select identity from empty clip");
  if (mode == IdentityMode::kFirst) return sample.frames.front();
  Rng rng(derive_seed(seed, "identity"));
  const size_t i = size_t(rng.uniform_int(sample.frames.size()));
  return sample.frames[i];
}

const ClipRecord &Corpus::info(int index) const {
  TFG_CHECK(index >= 0 && index < size(), "clip index ", index, " out of range [0,", size(), ")");
  return clips_[size_t(index)];
}

std::vector<int> Corpus::split_indices(const std::string &split) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (clips_[size_t(i)].split == split) out.push_back(i);
  return out;
}

std::vector<int> Corpus::shuffled_indices(const std::string &split, uint64_t seed) const {
  std::vector<int> idx = split_indices(split);
  Rng rng(derive_seed(seed, "corpus-order"));
  rng.shuffle(idx);
  return idx;
}

Corpus Corpus::open(const std::string &path) {
  TFG_CHECK(fs::exists(path), "corpus path does not exist: ", path);
  return fs::is_directory(path) ? open_frames_dir(path) : open_archive(path);
}

Corpus Corpus::open_archive(const std::string &path) {
  Corpus c;
  c.archive_ = std::make_shared<ArchiveReader>(path);
  nlohmann::json manifest =
      nlohmann::json::parse(c.archive_->read_string("manifest.json"), nullptr, false);
  TFG_CHECK(!manifest.is_discarded(), "malformed corpus manifest in ", path);
  TFG_CHECK(manifest.value("format", "") == "tfg-synthetic-corpus",
            "not a synthetic corpus archive: ", path);
  c.synth_cfg_ = manifest.at("config").get<SyntheticAvatarConfig>();
  c.mfcc_ = c.synth_cfg_->mfcc;

  TFG_CHECK(manifest.contains("clips") && manifest["clips"].is_array(),
            "corpus manifest missing clips array: ", path);
  for (const auto &j : manifest["clips"]) {
    ClipRecord r;
    r.id = j.at("id").get<std::string>();
    r.word_label = j.at("word_id").get<int>();
    r.has_label = true;
    r.split = j.at("split").get<std::string>();
    r.frame_count = j.at("frames").get<int>();
    r.fps = j.at("fps").get<double>();
    c.clips_.push_back(std::move(r));
  }
  TFG_CHECK(!c.clips_.empty(), "corpus is empty: ", path);
  return c;
}

Corpus Corpus::open_frames_dir(const std::string &root) {
  TFG_CHECK(fs::is_directory(root), "not a directory: ", root);
  const fs::path manifest_path = fs::path(root) / "manifest.json";
  TFG_CHECK(fs::exists(manifest_path), "corpus manifest not found: ", manifest_path.string());
  nlohmann::json manifest = load_json_file(manifest_path.string());

  Corpus c;
  c.root_ = root;
  if (manifest.contains("mfcc")) c.mfcc_ = manifest["mfcc"].get<audio::MfccConfig>();
  const double default_fps = manifest.value("fps", 25.0);

  TFG_CHECK(manifest.contains("clips") && manifest["clips"].is_array(),
            "corpus manifest missing clips array: ", manifest_path.string());
  for (const auto &j : manifest["clips"]) {
    TFG_CHECK(j.contains("id") && j.contains("frames_dir") && j.contains("wav"),
              "manifest clip entry missing id/frames_dir/wav");
    if (j.value("exclude", false)) continue;  // manifest-level filtering

    ClipRecord r;
    r.id = j.at("id").get<std::string>();
    r.frames_dir = (fs::path(root) / j.at("frames_dir").get<std::string>()).string();
    r.wav_path = (fs::path(root) / j.at("wav").get<std::string>()).string();
    r.fps = j.value("fps", default_fps);
    if (j.contains("word_label")) {
      r.word_label = j.at("word_label").get<int>();
      r.has_label = true;
    }
    if (j.contains("bbox")) {
      const auto &b = j.at("bbox");
      r.bbox = BoundingBox{b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                           b.at(3).get<int>()};
    }

    if (!fs::is_directory(r.frames_dir) || fs::is_empty(r.frames_dir)) {
      std::cerr << "[corpus] warning: skipping clip " << r.id << " (missing frames dir "
                << r.frames_dir << ")\n";
      ++c.skipped_;
      continue;
    }
    if (!fs::exists(r.wav_path)) {
      std::cerr << "[corpus] warning: skipping clip " << r.id << " (missing wav " << r.wav_path
                << ")\n";
      ++c.skipped_;
      continue;
    }
    c.clips_.push_back(std::move(r));
  }
  TFG_CHECK(!c.clips_.empty(), "corpus has no loadable clips: ", root);
  return c;
}

namespace {

TalkingFaceSample load_archive_clip(const ArchiveReader &ar, const ClipRecord &rec,
                                    const SyntheticAvatarConfig &cfg) {
  const std::string base = strcat_msg("clips/", rec.id, "/");
  TalkingFaceSample s;
  s.id = rec.id;
  s.fps = rec.fps;
  s.word_label = rec.word_label;
  s.has_label = rec.has_label;

  const std::vector<uint8_t> frames_u8 = ar.read(base + "frames.u8");
  const size_t frame_bytes = size_t(kFrameSize) * kFrameSize * 3;
  TFG_CHECK(frames_u8.size() == frame_bytes * size_t(rec.frame_count),
            "frame payload size mismatch for clip ", rec.id);
  s.frames.reserve(size_t(rec.frame_count));
  for (int t = 0; t < rec.frame_count; ++t) {
    std::vector<uint8_t> one(frames_u8.begin() + long(frame_bytes) * t,
                             frames_u8.begin() + long(frame_bytes) * (t + 1));
    s.frames.push_back(image_from_u8(one, kFrameSize, kFrameSize));
  }
  s.identity = s.frames.front();

  const std::vector<uint8_t> audio_bytes = ar.read(base + "audio.f32");
  audio::Waveform wav;
  wav.sample_rate_hz = cfg.mfcc.sample_rate_hz;
  wav.samples.resize(audio_bytes.size() / sizeof(float));
  std::memcpy(wav.samples.data(), audio_bytes.data(), audio_bytes.size());
  s.audio_features = audio::featurize_clip(wav, rec.fps, cfg.mfcc);

  const std::vector<uint8_t> lm_bytes = ar.read(base + "landmarks.f32");
  const size_t lm_count = lm_bytes.size() / sizeof(float);
  TFG_CHECK(lm_count == size_t(rec.frame_count) * 8, "landmark payload mismatch for ", rec.id);
  const float *lm = reinterpret_cast<const float *>(lm_bytes.data());
  for (int t = 0; t < rec.frame_count; ++t) {
    Matd m(4, 2);
    for (int p = 0; p < 4; ++p)
      for (int d = 0; d < 2; ++d) m(p, d) = double(lm[(t * 4 + p) * 2 + d]);
    s.landmarks.push_back(std::move(m));
  }
  s.has_landmarks = true;
  s.validate();
  return s;
}

TalkingFaceSample load_frames_dir_clip(const ClipRecord &rec, const audio::MfccConfig &mfcc) {
  std::vector<fs::path> frame_files;
  for (const auto &e : fs::directory_iterator(rec.frames_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") frame_files.push_back(e.path());
  }
  TFG_CHECK(!frame_files.empty(), "no PNG frames in ", rec.frames_dir);
  std::sort(frame_files.begin(), frame_files.end());

  WavData wav_raw = read_wav(rec.wav_path);
  audio::Waveform wav;
  wav.sample_rate_hz = mfcc.sample_rate_hz;
  wav.samples = resample_linear(wav_raw.samples, wav_raw.sample_rate_hz, mfcc.sample_rate_hz);

  auto ranges = audio::slice_windows(wav, mfcc.window_ms, 1000.0 / rec.fps);
  // keep only windows the video can cover, then pair by middle frame
  const double video_end_s = double(frame_files.size()) / rec.fps;
  while (!ranges.empty()) {
    const double mid_s = 0.5 * double(ranges.back().begin + ranges.back().end) /
                         mfcc.sample_rate_hz;
    if (mid_s <= video_end_s) break;
    ranges.pop_back();
  }
  TFG_CHECK(!ranges.empty(), "clip ", rec.id, ": video too short for one audio window");
  const std::vector<int> aligned =
      align_middle_frame(int(frame_files.size()), rec.fps, ranges, mfcc.sample_rate_hz);

  TalkingFaceSample s;
  s.id = rec.id;
  s.fps = rec.fps;
  s.word_label = rec.word_label;
  s.has_label = rec.has_label;
  s.frames.reserve(aligned.size());
  for (size_t j = 0; j < aligned.size(); ++j) {
    const PngImage png = read_png(frame_files[size_t(aligned[j])].string());
    Image img = image_from_u8(png.rgb, png.h, png.w);
    const BoundingBox box = rec.bbox ? *rec.bbox : BoundingBox{0, 0, img.w, img.h};
    s.frames.push_back(crop_resize_face(img, box));
  }
  s.identity = s.frames.front();

  audio::MfccSequence seq;
  for (size_t j = 0; j < aligned.size(); ++j) {
    const auto &r = ranges[j];
    std::span<const float> view(wav.samples.data() + r.begin, size_t(r.end - r.begin));
    audio::MfccWindow w = audio::compute_mfcc(view, wav.sample_rate_hz, mfcc);
    w.start_time_s = double(r.begin) / wav.sample_rate_hz;
    w.end_time_s = double(r.end) / wav.sample_rate_hz;
    seq.windows.push_back(std::move(w));
  }
  s.audio_features = std::move(seq);
  s.validate();
  return s;
}

}  // namespace

TalkingFaceSample Corpus::load(int index) const {
  const ClipRecord &rec = info(index);
  if (archive_) return load_archive_clip(*archive_, rec, *synth_cfg_);
  return load_frames_dir_clip(rec, mfcc_);
}

}  // namespace tfg::data
