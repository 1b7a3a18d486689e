// data/corpus.hpp

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

#ifndef TFG_DATA_CORPUS_HPP_
#define TFG_DATA_CORPUS_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tfg/data/synthetic.hpp"

namespace tfg {
class ArchiveReader;
}

namespace tfg::data {

struct BoundingBox {
  int x0 = 0, y0 = 0, width = 0, height = 0;
};

// Crop + bilinear resize to the canonical face resolution. Values stay in
// [-1, 1]; degenerate boxes and out-of-bounds boxes are rejected.
Image crop_resize_face(const Image &image, const BoundingBox &bbox);

// Middle-frame audio/video pairing: for each window, the frame whose midpoint
// is nearest the window midpoint, ties toward the earlier frame. Windows
// whose midpoint falls outside the video span are an error.
std::vector<int> align_middle_frame(int frame_count, double fps,
                                    const std::vector<audio::SampleRange> &windows,
                                    int sample_rate_hz);

enum class IdentityMode { kRandom, kFirst };

// kRandom draws uniformly over the clip frames (training); kFirst returns
// frame 0 (inference default).
Image select_identity(const TalkingFaceSample &sample, IdentityMode mode, uint64_t seed);

struct ClipRecord {
  std::string id;
  int word_label = -1;
  bool has_label = false;
  std::string split = "train";
  int frame_count = 0;
  double fps = 25.0;
  // frames-dir layout only
  std::string frames_dir, wav_path;
  std::optional<BoundingBox> bbox;
};

// Random-access corpus view over one of the two on-disk layouts. Samples are
// materialized per clip, so memory stays bounded by one clip at a time.
// Iteration order equals manifest order and is stable across passes.
class Corpus {
 public:
  // Autodetects: regular file -> synthetic archive, directory -> frames dirs
  // with WAV (manifest.json at the root).
  static Corpus open(const std::string &path);
  static Corpus open_archive(const std::string &path);
  static Corpus open_frames_dir(const std::string &root);

  int size() const { return int(clips_.size()); }
  const ClipRecord &info(int index) const;
  TalkingFaceSample load(int index) const;

  std::vector<int> split_indices(const std::string &split) const;
  // Deterministic shuffled view of a split.
  std::vector<int> shuffled_indices(const std::string &split, uint64_t seed) const;

  int skipped_clips() const { return skipped_; }
  const SyntheticAvatarConfig *synthetic_config() const {
    return synth_cfg_ ? &*synth_cfg_ : nullptr;
  }
  const audio::MfccConfig &mfcc_config() const { return mfcc_; }

 private:
  Corpus() = default;

  std::vector<ClipRecord> clips_;
  int skipped_ = 0;
  std::optional<SyntheticAvatarConfig> synth_cfg_;
  audio::MfccConfig mfcc_;
  std::shared_ptr<ArchiveReader> archive_;
  std::string root_;
};

}  // namespace tfg::data

#endif  // TFG_DATA_CORPUS_HPP_
