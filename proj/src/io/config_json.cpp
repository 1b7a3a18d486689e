// io/config_json.cpp

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

#include "tfg/io/config_json.hpp"

#include <cstdio>
#include <fstream>

#include "tfg/audio/mfcc.hpp"
#include "tfg/core/common.hpp"
#include "tfg/data/synthetic.hpp"
#include "tfg/model/config.hpp"

namespace tfg::audio {

void to_json(nlohmann::json &j, const MfccConfig &c) {
  j = nlohmann::json{{"sample_rate_hz", c.sample_rate_hz},
                     {"window_ms", c.window_ms},
                     {"sub_frame_ms", c.sub_frame_ms},
                     {"hop_ms", c.hop_ms},
                     {"fft_size", c.fft_size},
                     {"n_mels", c.n_mels},
                     {"n_coeffs", c.n_coeffs},
                     {"fmin_hz", c.fmin_hz},
                     {"fmax_hz", c.fmax_hz},
                     {"log_floor", c.log_floor}};
}

void from_json(const nlohmann::json &j, MfccConfig &c) {
  c.sample_rate_hz = j.value("sample_rate_hz", c.sample_rate_hz);
  c.window_ms = j.value("window_ms", c.window_ms);
  c.sub_frame_ms = j.value("sub_frame_ms", c.sub_frame_ms);
  c.hop_ms = j.value("hop_ms", c.hop_ms);
  c.fft_size = j.value("fft_size", c.fft_size);
  c.n_mels = j.value("n_mels", c.n_mels);
  c.n_coeffs = j.value("n_coeffs", c.n_coeffs);
  c.fmin_hz = j.value("fmin_hz", c.fmin_hz);
  c.fmax_hz = j.value("fmax_hz", c.fmax_hz);
  c.log_floor = j.value("log_floor", c.log_floor);
}

}  // namespace tfg::audio

namespace tfg::data {

void to_json(nlohmann::json &j, const SyntheticAvatarConfig &c) {
  j = nlohmann::json{{"vocabulary_size", c.vocabulary_size},
                     {"clip_frames", c.clip_frames},
                     {"fps", c.fps},
                     {"train_clips", c.train_clips},
                     {"test_clips", c.test_clips},
                     {"rng_seed", c.rng_seed},
                     {"mouth_center_x", c.mouth_center_x},
                     {"mouth_center_y", c.mouth_center_y},
                     {"mouth_width", c.mouth_width},
                     {"aperture_gain_px", c.aperture_gain_px},
                     {"pose_amplitude_px", c.pose_amplitude_px},
                     {"mfcc", c.mfcc}};
}

void from_json(const nlohmann::json &j, SyntheticAvatarConfig &c) {
  c.vocabulary_size = j.value("vocabulary_size", c.vocabulary_size);
  c.clip_frames = j.value("clip_frames", c.clip_frames);
  c.fps = j.value("fps", c.fps);
  c.train_clips = j.value("train_clips", c.train_clips);
  c.test_clips = j.value("test_clips", c.test_clips);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  c.mouth_center_x = j.value("mouth_center_x", c.mouth_center_x);
  c.mouth_center_y = j.value("mouth_center_y", c.mouth_center_y);
  c.mouth_width = j.value("mouth_width", c.mouth_width);
  c.aperture_gain_px = j.value("aperture_gain_px", c.aperture_gain_px);
  c.pose_amplitude_px = j.value("pose_amplitude_px", c.pose_amplitude_px);
  if (j.contains("mfcc")) c.mfcc = j.at("mfcc").get<audio::MfccConfig>();
}

}  // namespace tfg::data

namespace tfg::model {

void to_json(nlohmann::json &j, const ModelConfig &c) {
  j = nlohmann::json{{"image_size", c.image_size},
                     {"enc_channels", c.enc_channels},
                     {"z_audio_dim", c.z_audio_dim},
                     {"z_image_dim", c.z_image_dim},
                     {"hidden_dim", c.hidden_dim},
                     {"audio_channels", c.audio_channels},
                     {"mfcc_rows", c.mfcc_rows},
                     {"mfcc_cols", c.mfcc_cols},
                     {"sequential_window", c.sequential_window},
                     {"disc_image_channels", c.disc_image_channels},
                     {"disc_video_channels", c.disc_video_channels},
                     {"lipread_channels", c.lipread_channels},
                     {"video_clip_len", c.video_clip_len},
                     {"mouth_crop", c.mouth_crop},
                     {"vocab", c.vocab}};
}

void from_json(const nlohmann::json &j, ModelConfig &c) {
  c.image_size = j.value("image_size", c.image_size);
  if (j.contains("enc_channels")) c.enc_channels = j.at("enc_channels").get<std::vector<int>>();
  c.z_audio_dim = j.value("z_audio_dim", c.z_audio_dim);
  c.z_image_dim = j.value("z_image_dim", c.z_image_dim);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  if (j.contains("audio_channels"))
    c.audio_channels = j.at("audio_channels").get<std::vector<int>>();
  c.mfcc_rows = j.value("mfcc_rows", c.mfcc_rows);
  c.mfcc_cols = j.value("mfcc_cols", c.mfcc_cols);
  c.sequential_window = j.value("sequential_window", c.sequential_window);
  if (j.contains("disc_image_channels"))
    c.disc_image_channels = j.at("disc_image_channels").get<std::vector<int>>();
  if (j.contains("disc_video_channels"))
    c.disc_video_channels = j.at("disc_video_channels").get<std::vector<int>>();
  if (j.contains("lipread_channels"))
    c.lipread_channels = j.at("lipread_channels").get<std::vector<int>>();
  c.video_clip_len = j.value("video_clip_len", c.video_clip_len);
  c.mouth_crop = j.value("mouth_crop", c.mouth_crop);
  c.vocab = j.value("vocab", c.vocab);
}

}  // namespace tfg::model

namespace tfg {

nlohmann::json load_json_file(const std::string &path) {
  std::ifstream in(path);
  TFG_CHECK(in.good(), "cannot open JSON file: ", path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  TFG_CHECK(!j.is_discarded(), "malformed JSON: ", path);
  return j;
}

void save_json_file(const std::string &path, const nlohmann::json &j) {
  std::ofstream os(path);
  TFG_CHECK(os.good(), "cannot write JSON file: ", path);
  os << j.dump(2) << "\n";
  TFG_CHECK(os.good(), "short write: ", path);
}

uint64_t json_hash(const nlohmann::json &j) {
  const std::string s = j.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= uint64_t(uint8_t(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tfg
