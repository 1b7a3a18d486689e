// model/generator.hpp

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

#ifndef TFG_MODEL_GENERATOR_HPP_
#define TFG_MODEL_GENERATOR_HPP_

#include <memory>
#include <string>
#include <vector>

#include "tfg/model/config.hpp"
#include "tfg/nn/gru.hpp"
#include "tfg/nn/layers.hpp"

namespace tfg::model {

using nn::Param;
using nn::ParamVisitor;

// Audio latent and identity latent plus the recurrent hidden vector carried
// across steps.
template <typename S>
struct HybridState {
  Vec<S> z_audio;
  Vec<S> z_image;
  Vec<S> hidden;
};

// ---------------------------------------------------------------------------
// E_A: conv stack over the MFCC window (treated as a 1-channel image)

template <typename S>
class AudioEncoder {
 public:
  AudioEncoder(const ModelConfig &cfg, Rng &rng) : cfg_(cfg) {
    int c = 1, h = cfg.mfcc_rows, w = cfg.mfcc_cols;
    for (size_t i = 0; i < cfg.audio_channels.size(); ++i) {
      const int co = cfg.audio_channels[i];
      convs_.emplace_back(strcat_msg("audio_enc/conv", i), c, co, 3, 2, 1, rng);
      acts_.emplace_back(0.2);
      c = co;
      h = (h + 2 - 3) / 2 + 1;
      w = (w + 2 - 3) / 2 + 1;
      TFG_CHECK(h > 0 && w > 0, "audio encoder input too small at level ", i);
    }
    flat_dim_ = c * h * w;
    out_c_ = c;
    out_h_ = h;
    out_w_ = w;
    fc_ = std::make_unique<nn::Linear<S>>("audio_enc/fc", flat_dim_, cfg.z_audio_dim, rng);
  }

  // window: mfcc_rows x mfcc_cols (already normalized)
  Vec<S> forward(const Mat<S> &window, bool train) {
    TFG_CHECK(window.rows() == cfg_.mfcc_rows && window.cols() == cfg_.mfcc_cols,
              "MFCC window shape ", window.rows(), "x", window.cols(), " does not match config ",
              cfg_.mfcc_rows, "x", cfg_.mfcc_cols);
    FeatureMap<S> x(1, cfg_.mfcc_rows, cfg_.mfcc_cols);
    for (int r = 0; r < cfg_.mfcc_rows; ++r)
      for (int cidx = 0; cidx < cfg_.mfcc_cols; ++cidx) x.at(0, r, cidx) = window(r, cidx);
    for (size_t i = 0; i < convs_.size(); ++i) {
      x = convs_[i].forward(x, train);
      x.v = acts_[i].forward(x.v, train);
    }
    return fc_->forward(flatten_map(x), train);
  }

  // returns the gradient w.r.t. the input window
  Mat<S> backward(const Vec<S> &gz) {
    Vec<S> gflat = fc_->backward(gz);
    FeatureMap<S> g = unflatten_map(gflat, out_c_, out_h_, out_w_);
    for (size_t i = convs_.size(); i-- > 0;) {
      g.v = acts_[i].backward(g.v);
      g = convs_[i].backward(g);
    }
    Mat<S> gw(cfg_.mfcc_rows, cfg_.mfcc_cols);
    for (int r = 0; r < cfg_.mfcc_rows; ++r)
      for (int cidx = 0; cidx < cfg_.mfcc_cols; ++cidx) gw(r, cidx) = g.at(0, r, cidx);
    return gw;
  }

  void visit(const ParamVisitor<S> &f) {
    for (auto &cv : convs_) cv.visit(f);
    fc_->visit(f);
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
  int flat_dim_ = 0, out_c_ = 0, out_h_ = 0, out_w_ = 0;
};

// ---------------------------------------------------------------------------
// E_I: strided conv pyramid; per-level activations feed the decoder skips

template <typename S>
class ImageEncoder {
 public:
  ImageEncoder(const ModelConfig &cfg, Rng &rng) : cfg_(cfg) {
    int c = 3;
    for (int i = 0; i < cfg.levels(); ++i) {
      convs_.emplace_back(strcat_msg("img_enc/conv", i), c, cfg.enc_channels[size_t(i)], 4, 2, 1,
                          rng);
      acts_.emplace_back(0.2);
      c = cfg.enc_channels[size_t(i)];
    }
    const int b = cfg.bottom_size();
    fc_ = std::make_unique<nn::Linear<S>>("img_enc/fc", c * b * b, cfg.z_image_dim, rng);
  }

  struct Encoded {
    Vec<S> z;
    std::vector<FeatureMap<S>> skips;  // one per level, coarsest last
  };

  Encoded forward(const FeatureMap<S> &image, bool train) {
    TFG_CHECK(image.c == 3 && image.h == cfg_.image_size && image.w == cfg_.image_size,
              "image encoder expects 3x", cfg_.image_size, "x", cfg_.image_size, ", got ",
              image.c, "x", image.h, "x", image.w);
    Encoded out;
    FeatureMap<S> x = image;
    for (size_t i = 0; i < convs_.size(); ++i) {
      x = convs_[i].forward(x, train);
      x.v = acts_[i].forward(x.v, train);
      out.skips.push_back(x);
    }
    out.z = fc_->forward(flatten_map(x), train);
    return out;
  }

  // grad_skips may be null when no skip gradient flows (latent-only use)
  FeatureMap<S> backward(const Vec<S> &gz, const std::vector<FeatureMap<S>> *grad_skips) {
    const int b = cfg_.bottom_size();
    Vec<S> gflat = fc_->backward(gz);
    FeatureMap<S> g = unflatten_map(gflat, cfg_.enc_channels.back(), b, b);
    for (size_t i = convs_.size(); i-- > 0;) {
      if (grad_skips != nullptr) g.v += (*grad_skips)[i].v;
      g.v = acts_[i].backward(g.v);
      g = convs_[i].backward(g);
    }
    return g;
  }

  std::vector<FeatureMap<S>> zero_skips() const {
    std::vector<FeatureMap<S>> out;
    int sz = cfg_.image_size;
    for (int i = 0; i < cfg_.levels(); ++i) {
      sz /= 2;
      out.emplace_back(cfg_.enc_channels[size_t(i)], sz, sz);
    }
    return out;
  }

  void visit(const ParamVisitor<S> &f) {
    for (auto &cv : convs_) cv.visit(f);
    fc_->visit(f);
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
};

// ---------------------------------------------------------------------------
// Dec: transposed-conv pyramid with skip concatenation, tanh output

template <typename S>
class FrameDecoder {
 public:
  FrameDecoder(const ModelConfig &cfg, Rng &rng) : cfg_(cfg) {
    const int b = cfg.bottom_size();
    const int c_top = cfg.enc_channels.back();
    fc_ = std::make_unique<nn::Linear<S>>("dec/fc", cfg.hidden_dim, c_top * b * b, rng);
    for (int j = cfg.levels() - 1; j >= 0; --j) {
      const int cin = 2 * cfg.enc_channels[size_t(j)];  // x concat skip
      const int cout = (j > 0) ? cfg.enc_channels[size_t(j - 1)] : 3;
      deconvs_.emplace_back(strcat_msg("dec/deconv", j), cin, cout, 4, 2, 1, rng);
      if (j > 0) acts_.emplace_back(0.2);
    }
  }

  FeatureMap<S> forward(const Vec<S> &dec_in, const std::vector<FeatureMap<S>> &skips,
                        bool train) {
    TFG_CHECK(int(skips.size()) == cfg_.levels(), "decoder expects ", cfg_.levels(), " skips");
    const int b = cfg_.bottom_size();
    Vec<S> pre = fc_->forward(dec_in, train);
    pre = fc_act_.forward(pre, train);
    FeatureMap<S> x = unflatten_map(pre, cfg_.enc_channels.back(), b, b);
    for (int j = cfg_.levels() - 1; j >= 0; --j) {
      const size_t d = size_t(cfg_.levels() - 1 - j);
      x = deconvs_[d].forward(concat_channels(x, skips[size_t(j)]), train);
      if (j > 0) {
        x.v = acts_[d].forward(x.v, train);
      } else {
        x.v = out_act_.forward(x.v, train);
      }
    }
    return x;
  }

  struct Grads {
    Vec<S> dec_in;
    std::vector<FeatureMap<S>> skips;
  };

  Grads backward(const FeatureMap<S> &gframe) {
    Grads out;
    out.skips.resize(size_t(cfg_.levels()));
    FeatureMap<S> g = gframe;
    for (int j = 0; j < cfg_.levels(); ++j) {
      const size_t d = size_t(cfg_.levels() - 1 - j);
      if (j > 0) {
        g.v = acts_[d].backward(g.v);
      } else {
        g.v = out_act_.backward(g.v);
      }
      FeatureMap<S> gin = deconvs_[d].backward(g);
      auto split = split_channels(gin, cfg_.enc_channels[size_t(j)]);
      g = std::move(split.first);
      out.skips[size_t(j)] = std::move(split.second);
    }
    Vec<S> gpre = fc_act_.backward(flatten_map(g));
    out.dec_in = fc_->backward(gpre);
    return out;
  }

  void visit(const ParamVisitor<S> &f) {
    fc_->visit(f);
    for (auto &dc : deconvs_) dc.visit(f);
  }
  void clear_cache() {
    fc_->clear_cache();
    fc_act_.clear_cache();
    for (auto &dc : deconvs_) dc.clear_cache();
    for (auto &a : acts_) a.clear_cache();
    out_act_.clear_cache();
  }

 private:
  ModelConfig cfg_;
  std::unique_ptr<nn::Linear<S>> fc_;
  nn::LeakyRelu<S> fc_act_{0.2};
  std::vector<nn::ConvTranspose2d<S>> deconvs_;  // coarsest first
  std::vector<nn::LeakyRelu<S>> acts_;
  nn::TanhLayer<S> out_act_;
};

// ---------------------------------------------------------------------------
// recurrent unit over the hybrid feature; decoder input is the new hidden

template <typename S>
class RecurrentUnit {
 public:
  RecurrentUnit(const ModelConfig &cfg, int input_dim, Rng &rng)
      : cell_("gru", input_dim, cfg.hidden_dim, rng),
        init_fc_("gru/init", cfg.z_image_dim, cfg.hidden_dim, rng) {}

  // Carried-state schemes start from an identity-derived hidden state, so
  // the first frames carry no cold-start transient.
  Vec<S> initial_hidden(const Vec<S> &z_image, bool train) {
    Vec<S> pre = init_fc_.forward(z_image, train);
    return init_act_.forward(pre, train);
  }

  // gradient w.r.t. the identity latent
  Vec<S> backward_initial(const Vec<S> &ghidden0) {
    Vec<S> gpre = init_act_.backward(ghidden0);
    return init_fc_.backward(gpre);
  }

  // returns (new hidden, decoder input); the decoder consumes the hidden
  std::pair<Vec<S>, Vec<S>> step(const Vec<S> &hidden, const Vec<S> &x, bool train) {
    Vec<S> h = cell_.forward(hidden, x, train);
    return {h, h};
  }

  // hybrid-state form: the transition runs on [z_audio ; z_image]
  std::pair<Vec<S>, Vec<S>> step(const HybridState<S> &state, bool train) {
    Vec<S> x(state.z_audio.size() + state.z_image.size());
    x << state.z_audio, state.z_image;
    return step(state.hidden, x, train);
  }

  std::pair<Vec<S>, Vec<S>> backward(const Vec<S> &ghidden) { return cell_.backward(ghidden); }

  nn::GruCell<S> &cell() { return cell_; }
  void visit(const ParamVisitor<S> &f) {
    cell_.visit(f);
    init_fc_.visit(f);
  }
  void clear_cache() {
    cell_.clear_cache();
    init_fc_.clear_cache();
    init_act_.clear_cache();
  }

 private:
  nn::GruCell<S> cell_;
  nn::Linear<S> init_fc_;
  nn::TanhLayer<S> init_act_;
};

// ---------------------------------------------------------------------------
// G = (E_A, E_I, recurrent unit, Dec) under one generation scheme

template <typename S>
class Generator {
 public:
  Generator(const ModelConfig &cfg, GenerationScheme scheme, uint64_t init_seed)
      : cfg_(cfg), scheme_(scheme) {
    cfg.validate();
    Rng rng(derive_seed(init_seed, "generator"));
    audio_enc_ = std::make_unique<AudioEncoder<S>>(cfg, rng);
    image_enc_ = std::make_unique<ImageEncoder<S>>(cfg, rng);
    const int gru_in = cfg.z_audio_dim +
                       cfg.z_image_dim * (scheme == GenerationScheme::kRecurrentPrevFrame ? 2 : 1);
    recurrent_ = std::make_unique<RecurrentUnit<S>>(cfg, gru_in, rng);
    decoder_ = std::make_unique<FrameDecoder<S>>(cfg, rng);
  }

  const ModelConfig &config() const { return cfg_; }
  GenerationScheme scheme() const { return scheme_; }

  // Generates K frames from one identity image and K normalized MFCC windows.
  // train=true arms the cache stacks for one subsequent backward().
  std::vector<FeatureMap<S>> generate(const FeatureMap<S> &identity,
                                      const std::vector<Mat<S>> &windows, bool train) {
    TFG_CHECK(!windows.empty(), "empty audio sequence");
    TFG_CHECK(!pending_, "generator already has a pending backward");
    const int K = int(windows.size());
    const int da = cfg_.z_audio_dim, di = cfg_.z_image_dim;
    std::vector<FeatureMap<S>> frames;
    frames.reserve(size_t(K));
    seq_conds_.clear();

    const bool wants_identity_ctx = scheme_ != GenerationScheme::kSequential;
    const bool carried = scheme_ == GenerationScheme::kRecurrent ||
                         scheme_ == GenerationScheme::kRecurrentPrevFrame;
    typename ImageEncoder<S>::Encoded id_enc;
    if (wants_identity_ctx) id_enc = image_enc_->forward(identity, train);

    Vec<S> h = carried ? recurrent_->initial_hidden(id_enc.z, train)
                       : Vec<S>::Zero(cfg_.hidden_dim);
    for (int t = 0; t < K; ++t) {
      Vec<S> z_a = audio_enc_->forward(windows[size_t(t)], train);
      Vec<S> x;
      const std::vector<FeatureMap<S>> *skips = nullptr;

      if (scheme_ == GenerationScheme::kFrameToFrame || scheme_ == GenerationScheme::kRecurrent) {
        x.resize(da + di);
        x << z_a, id_enc.z;
        skips = &id_enc.skips;
      } else if (scheme_ == GenerationScheme::kSequential) {
        // conditioning frames: last L of [identity, generated...], detached
        const int L = cfg_.sequential_window;
        std::vector<const FeatureMap<S> *> conds;
        for (int back = std::min(L, t + 1); back >= 1; --back) {
          const int idx = t - back;  // idx == -1 refers to the identity image
          conds.push_back(idx < 0 ? &identity : &frames[size_t(idx)]);
        }
        Vec<S> z_mean = Vec<S>::Zero(di);
        for (const auto *c : conds) {
          seq_last_enc_ = image_enc_->forward(*c, train);
          z_mean += seq_last_enc_.z;
        }
        z_mean /= S(conds.size());
        seq_conds_.push_back(int(conds.size()));
        x.resize(da + di);
        x << z_a, z_mean;
        skips = &seq_last_enc_.skips;
      } else {  // kRecurrentPrevFrame
        const FeatureMap<S> &prev = (t == 0) ? identity : frames[size_t(t - 1)];
        prev_enc_ = image_enc_->forward(prev, train);
        x.resize(da + 2 * di);
        x << z_a, id_enc.z, prev_enc_.z;
        skips = &id_enc.skips;
      }

      const bool stateless = scheme_ == GenerationScheme::kFrameToFrame ||
                             scheme_ == GenerationScheme::kSequential;
      auto [h_new, dec_in] =
          recurrent_->step(stateless ? Vec<S>::Zero(cfg_.hidden_dim).eval() : h, x, train);
      h = h_new;
      frames.push_back(decoder_->forward(dec_in, *skips, train));
    }
    if (train) {
      pending_ = true;
      last_K_ = K;
    }
    return frames;
  }

  // Runs truncated backpropagation through the sequence: full flow through
  // the hidden chain, detached re-encodings of generated frames.
  void backward(const std::vector<FeatureMap<S>> &grad_frames) {
    TFG_CHECK(pending_, "generator backward without pending forward");
    TFG_CHECK(int(grad_frames.size()) == last_K_, "grad count ", grad_frames.size(),
              " does not match sequence length ", last_K_);
    pending_ = false;
    const int K = last_K_;
    const int da = cfg_.z_audio_dim, di = cfg_.z_image_dim;

    const bool wants_identity_ctx = scheme_ != GenerationScheme::kSequential;
    Vec<S> g_zi_total = Vec<S>::Zero(di);
    std::vector<FeatureMap<S>> g_skips_total = image_enc_->zero_skips();
    Vec<S> gh_next = Vec<S>::Zero(cfg_.hidden_dim);
    const bool carry = scheme_ == GenerationScheme::kRecurrent ||
                       scheme_ == GenerationScheme::kRecurrentPrevFrame;

    for (int t = K - 1; t >= 0; --t) {
      typename FrameDecoder<S>::Grads dg = decoder_->backward(grad_frames[size_t(t)]);
      Vec<S> gh = dg.dec_in;
      if (carry) gh += gh_next;
      auto [gx, gh_prev] = recurrent_->backward(gh);
      gh_next = gh_prev;

      if (scheme_ == GenerationScheme::kFrameToFrame || scheme_ == GenerationScheme::kRecurrent) {
        g_zi_total += gx.segment(da, di);
        for (size_t i = 0; i < g_skips_total.size(); ++i) g_skips_total[i].v += dg.skips[i].v;
      } else if (scheme_ == GenerationScheme::kSequential) {
        const int n_conds = seq_conds_[size_t(t)];
        const Vec<S> gz_each = gx.segment(da, di) / S(n_conds);
        for (int c = n_conds - 1; c >= 0; --c) {
          // most recent conditioning frame also receives the skip gradients
          image_enc_->backward(gz_each, c == n_conds - 1 ? &dg.skips : nullptr);
        }
      } else {  // kRecurrentPrevFrame
        g_zi_total += gx.segment(da, di);
        for (size_t i = 0; i < g_skips_total.size(); ++i) g_skips_total[i].v += dg.skips[i].v;
        image_enc_->backward(gx.segment(da + di, di), nullptr);
      }
      audio_enc_->backward(gx.head(da));
    }
    if (carry) g_zi_total += recurrent_->backward_initial(gh_next);
    if (wants_identity_ctx) image_enc_->backward(g_zi_total, &g_skips_total);
  }

  std::vector<Param<S> *> params() {
    std::vector<Param<S> *> out;
    visit([&](Param<S> &p) { out.push_back(&p); });
    return out;
  }

  void visit(const ParamVisitor<S> &f) {
    audio_enc_->visit(f);
    image_enc_->visit(f);
    recurrent_->visit(f);
    decoder_->visit(f);
  }

  void clear_cache() {
    audio_enc_->clear_cache();
    image_enc_->clear_cache();
    recurrent_->clear_cache();
    decoder_->clear_cache();
    pending_ = false;
    seq_conds_.clear();
  }

  AudioEncoder<S> &audio_encoder() { return *audio_enc_; }
  ImageEncoder<S> &image_encoder() { return *image_enc_; }
  RecurrentUnit<S> &recurrent_unit() { return *recurrent_; }
  FrameDecoder<S> &frame_decoder() { return *decoder_; }

 private:
  ModelConfig cfg_;
  GenerationScheme scheme_;
  std::unique_ptr<AudioEncoder<S>> audio_enc_;
  std::unique_ptr<ImageEncoder<S>> image_enc_;
  std::unique_ptr<RecurrentUnit<S>> recurrent_;
  std::unique_ptr<FrameDecoder<S>> decoder_;

  bool pending_ = false;
  int last_K_ = 0;
  std::vector<int> seq_conds_;
  typename ImageEncoder<S>::Encoded seq_last_enc_, prev_enc_;
};

// Ordered generated frames plus provenance.
struct GeneratedSequence {
  std::vector<FeatureMap<float>> frames;
  GenerationScheme scheme = GenerationScheme::kRecurrent;
  uint64_t seed = 0;
};

}  // namespace tfg::model

#endif  // TFG_MODEL_GENERATOR_HPP_
