// model/discriminators.hpp

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

#ifndef TFG_MODEL_DISCRIMINATORS_HPP_
#define TFG_MODEL_DISCRIMINATORS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <memory>
#include <vector>

#include "tfg/model/config.hpp"
#include "tfg/nn/layers.hpp"

namespace tfg::model {

// ---------------------------------------------------------------------------
// D_I: per-frame realism, strided conv stack + sigmoid head

template <typename S>
class DiscImage {
 public:
  DiscImage(const ModelConfig &cfg, Rng &rng) : cfg_(cfg) {
    int c = 3, sz = cfg.image_size;
    for (size_t i = 0; i < cfg.disc_image_channels.size(); ++i) {
      const int co = cfg.disc_image_channels[i];
      convs_.emplace_back(strcat_msg("disc_img/conv", i), c, co, 4, 2, 1, rng);
      acts_.emplace_back(0.2);
      c = co;
      sz /= 2;
      TFG_CHECK(sz >= 1, "too many image discriminator levels");
    }
    out_c_ = c;
    out_sz_ = sz;
    fc_ = std::make_unique<nn::Linear<S>>("disc_img/fc", c * sz * sz, 1, rng);
  }

  // raw logit; probability = sigmoid(logit), strictly inside (0,1)
  S forward(const FeatureMap<S> &frame, bool train) {
    TFG_CHECK(frame.c == 3 && frame.h == cfg_.image_size && frame.w == cfg_.image_size,
              "image discriminator expects 3x", cfg_.image_size, "x", cfg_.image_size);
    FeatureMap<S> x = frame;
    for (size_t i = 0; i < convs_.size(); ++i) {
      x = convs_[i].forward(x, train);
      x.v = acts_[i].forward(x.v, train);
    }
    Vec<S> flat = flatten_map(x);
    Vec<S> logit = fc_->forward(flat, train);
    return logit(0);
  }

  S prob(const FeatureMap<S> &frame) {
    const S logit = forward(frame, false);
    return S(1) / (S(1) + std::exp(-logit));
  }

  FeatureMap<S> backward(S glogit) {
    Vec<S> g(1);
    g(0) = glogit;
    Vec<S> gflat = fc_->backward(g);
    FeatureMap<S> gx = unflatten_map(gflat, out_c_, out_sz_, out_sz_);
    for (size_t i = convs_.size(); i-- > 0;) {
      gx.v = acts_[i].backward(gx.v);
      gx = convs_[i].backward(gx);
    }
    return gx;
  }

  void visit(const nn::ParamVisitor<S> &f) {
    for (auto &cv : convs_) cv.visit(f);
    fc_->visit(f);
  }
  std::vector<nn::Param<S> *> params() {
    std::vector<nn::Param<S> *> out;
    visit([&](nn::Param<S> &p) { out.push_back(&p); });
    return out;
  }
  void clear_cache() {
    for (auto &cv : convs_) cv.clear_cache();
    for (auto &a : acts_) a.clear_cache();
    fc_->clear_cache();
  }

 private:
  ModelConfig cfg_;
  std::vector<nn::Conv2d<S>> convs_;
  std::vector<nn::LeakyRelu<S>> acts_;
  std::unique_ptr<nn::Linear<S>> fc_;
  int out_c_ = 0, out_sz_ = 0;
};

// ---------------------------------------------------------------------------
// D_V: clip realism via 3D convolutions over exactly video_clip_len frames

template <typename S>
class DiscVideo {
 public:
  DiscVideo(const ModelConfig &cfg, Rng &rng) : cfg_(cfg) {
    int c = 3, sz = cfg.image_size, t = cfg.video_clip_len;
    for (size_t i = 0; i < cfg.disc_video_channels.size(); ++i) {
      const int co = cfg.disc_video_channels[i];
      convs_.emplace_back(strcat_msg("disc_vid/conv", i), c, co, 4, 4, 2, 2, 1, 1, rng);
      acts_.emplace_back(0.2);
      c = co;
      sz /= 2;
      t = (t + 2 - 4) / 2 + 1;
      TFG_CHECK(sz >= 1 && t >= 1, "video discriminator shrank below 1 at level ", i);
    }
    out_c_ = c;
    out_sz_ = sz;
    out_t_ = t;
    fc_ = std::make_unique<nn::Linear<S>>("disc_vid/fc", c * t * sz * sz, 1, rng);
  }

  S forward(const FeatureVolume<S> &clip, bool train) {
    TFG_CHECK(clip.t == cfg_.video_clip_len, "video discriminator needs exactly ",
              cfg_.video_clip_len, " frames, got ", clip.t);
    TFG_CHECK(clip.c == 3 && clip.h == cfg_.image_size && clip.w == cfg_.image_size,
              "bad clip shape for video discriminator");
    FeatureVolume<S> x = clip;
    for (size_t i = 0; i < convs_.size(); ++i) {
      x = convs_[i].forward(x, train);
      x.v = acts_[i].forward(x.v, train);
    }
    Vec<S> logit = fc_->forward(flatten_volume(x), train);
    return logit(0);
  }

  S prob(const FeatureVolume<S> &clip) {
    const S logit = forward(clip, false);
    return S(1) / (S(1) + std::exp(-logit));
  }

  FeatureVolume<S> backward(S glogit) {
    Vec<S> g(1);
    g(0) = glogit;
    Vec<S> gflat = fc_->backward(g);
    FeatureVolume<S> gx = unflatten_volume(gflat, out_c_, out_t_, out_sz_, out_sz_);
    for (size_t i = convs_.size(); i-- > 0;) {
      gx.v = acts_[i].backward(gx.v);
      gx = convs_[i].backward(gx);
    }
    return gx;
  }

  void visit(const nn::ParamVisitor<S> &f) {
    for (auto &cv : convs_) cv.visit(f);
    fc_->visit(f);
  }
  std::vector<nn::Param<S> *> params() {
    std::vector<nn::Param<S> *> out;
    visit([&](nn::Param<S> &p) { out.push_back(&p); });
    return out;
  }
  void clear_cache() {
    for (auto &cv : convs_) cv.clear_cache();
    for (auto &a : acts_) a.clear_cache();
    fc_->clear_cache();
  }

 private:
  ModelConfig cfg_;
  std::vector<nn::Conv3d<S>> convs_;
  std::vector<nn::LeakyRelu<S>> acts_;
  std::unique_ptr<nn::Linear<S>> fc_;
  int out_c_ = 0, out_sz_ = 0, out_t_ = 0;
};

// ---------------------------------------------------------------------------
// D_l: word classifier over mouth-region sequences (3D trunk, temporal mean
// pooling, linear head). Temporal extent is free as long as K >= 4.

template <typename S>
class LipReader {
 public:
  static constexpr int kMinFrames = 4;

  int forward_crop_size() const { return cfg_.mouth_crop; }

  LipReader(const ModelConfig &cfg, Rng &rng) : cfg_(cfg) {
    int c = 3, sz = cfg.mouth_crop;
    for (size_t i = 0; i < cfg.lipread_channels.size(); ++i) {
      const int co = cfg.lipread_channels[i];
      convs_.emplace_back(strcat_msg("lipread/conv", i), c, co, 3, 4, 1, 2, 1, 1, rng);
      acts_.emplace_back(0.2);
      c = co;
      sz /= 2;
      TFG_CHECK(sz >= 1, "too many lip-reader levels");
    }
    out_c_ = c;
    out_sz_ = sz;
    fc_ = std::make_unique<nn::Linear<S>>("lipread/fc", c * sz * sz, cfg.vocab, rng);
  }

  Vec<S> forward(const FeatureVolume<S> &mouths, bool train) {
    TFG_CHECK(mouths.t >= kMinFrames, "lip reader needs at least ", kMinFrames,
              " frames, got ", mouths.t);
    TFG_CHECK(mouths.c == 3 && mouths.h == cfg_.mouth_crop && mouths.w == cfg_.mouth_crop,
              "bad mouth sequence shape");
    FeatureVolume<S> x = mouths;
    for (size_t i = 0; i < convs_.size(); ++i) {
      x = convs_[i].forward(x, train);
      x.v = acts_[i].forward(x.v, train);
    }
    // temporal mean pooling
    FeatureMap<S> pooled(x.c, x.h, x.w);
    const Eigen::Index hw = Eigen::Index(x.h) * x.w;
    for (int ti = 0; ti < x.t; ++ti) pooled.v += x.v.middleRows(ti * hw, hw);
    pooled.v /= S(x.t);
    if (train) pool_t_.push_back(x.t);
    return fc_->forward(flatten_map(pooled), train);
  }

  FeatureVolume<S> backward(const Vec<S> &glogits) {
    TFG_CHECK(!pool_t_.empty(), "lip reader backward without forward");
    const int t = pool_t_.back();
    pool_t_.pop_back();
    Vec<S> gflat = fc_->backward(glogits);
    FeatureMap<S> gpool = unflatten_map(gflat, out_c_, out_sz_, out_sz_);
    FeatureVolume<S> gx(out_c_, t, out_sz_, out_sz_);
    const Eigen::Index hw = Eigen::Index(out_sz_) * out_sz_;
    for (int ti = 0; ti < t; ++ti) gx.v.middleRows(ti * hw, hw) = gpool.v / S(t);
    for (size_t i = convs_.size(); i-- > 0;) {
      gx.v = acts_[i].backward(gx.v);
      gx = convs_[i].backward(gx);
    }
    return gx;
  }

  void visit(const nn::ParamVisitor<S> &f) {
    for (auto &cv : convs_) cv.visit(f);
    fc_->visit(f);
  }
  std::vector<nn::Param<S> *> params() {
    std::vector<nn::Param<S> *> out;
    visit([&](nn::Param<S> &p) { out.push_back(&p); });
    return out;
  }
  void clear_cache() {
    for (auto &cv : convs_) cv.clear_cache();
    for (auto &a : acts_) a.clear_cache();
    fc_->clear_cache();
    pool_t_.clear();
  }

 private:
  ModelConfig cfg_;
  std::vector<nn::Conv3d<S>> convs_;
  std::vector<nn::LeakyRelu<S>> acts_;
  std::unique_ptr<nn::Linear<S>> fc_;
  std::vector<int> pool_t_;
  int out_c_ = 0, out_sz_ = 0;
};

// ---------------------------------------------------------------------------
// mouth-region extraction

template <typename S>
struct MouthSequence {
  std::vector<FeatureMap<S>> crops;         // K crops, crop_size square
  std::vector<std::array<int, 2>> origins;  // per-frame (y0, x0) in the frame
  int crop_size = 48;
  bool clamped = false;
};

// Landmark-based when landmarks are given (window centered on the mouth
// landmarks), fixed lower-center geometry otherwise. Out-of-bounds windows
// are clamped with a warning.
template <typename S>
MouthSequence<S> crop_mouth(const std::vector<FeatureMap<S>> &frames,
                            const std::vector<Matd> *landmarks, int crop_size) {
  TFG_CHECK(!frames.empty(), "crop_mouth on empty sequence");
  MouthSequence<S> out;
  out.crop_size = crop_size;
  out.crops.reserve(frames.size());
  for (size_t t = 0; t < frames.size(); ++t) {
    const auto &f = frames[t];
    TFG_CHECK(crop_size <= f.h && crop_size <= f.w, "crop larger than frame");
    int y0, x0;
    if (landmarks != nullptr) {
      const Matd &lm = (*landmarks)[t];
      const double cx = lm.col(0).mean();
      const double cy = lm.col(1).mean();
      y0 = int(std::lround(cy)) - crop_size / 2;
      x0 = int(std::lround(cx)) - crop_size / 2;
    } else {
      y0 = f.h - crop_size;              // rows [h-crop, h)
      x0 = (f.w - crop_size) / 2;        // centered columns
    }
    const int y0c = std::clamp(y0, 0, f.h - crop_size);
    const int x0c = std::clamp(x0, 0, f.w - crop_size);
    if (y0c != y0 || x0c != x0) out.clamped = true;
    FeatureMap<S> crop(f.c, crop_size, crop_size);
    for (int ch = 0; ch < f.c; ++ch)
      for (int y = 0; y < crop_size; ++y)
        for (int x = 0; x < crop_size; ++x) crop.at(ch, y, x) = f.at(ch, y0c + y, x0c + x);
    out.crops.push_back(std::move(crop));
    out.origins.push_back({y0c, x0c});
  }
  if (out.clamped) {
    std::cerr << "[crop_mouth] warning: crop window clamped to frame bounds\n";
  }
  return out;
}

// Adjoint of crop_mouth for generator training: adds crop gradients back into
// per-frame gradients at the recorded origins.
template <typename S>
void scatter_mouth_grads(const MouthSequence<S> &seq,
                         const std::vector<FeatureMap<S>> &crop_grads,
                         std::vector<FeatureMap<S>> *frame_grads) {
  TFG_CHECK(crop_grads.size() == seq.crops.size() && frame_grads->size() == seq.crops.size(),
            "scatter_mouth_grads size mismatch");
  for (size_t t = 0; t < crop_grads.size(); ++t) {
    auto &fg = (*frame_grads)[t];
    const auto [y0, x0] = seq.origins[t];
    for (int ch = 0; ch < fg.c; ++ch)
      for (int y = 0; y < seq.crop_size; ++y)
        for (int x = 0; x < seq.crop_size; ++x)
          fg.at(ch, y0 + y, x0 + x) += crop_grads[t].at(ch, y, x);
  }
}

}  // namespace tfg::model

#endif  // TFG_MODEL_DISCRIMINATORS_HPP_
