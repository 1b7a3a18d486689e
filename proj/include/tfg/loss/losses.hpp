// loss/losses.hpp

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

#ifndef TFG_LOSS_LOSSES_HPP_
#define TFG_LOSS_LOSSES_HPP_

#include <cmath>
#include <vector>

#include "tfg/core/tensor.hpp"

namespace tfg::loss {

struct LossWeights {
  double lambda_i = 1e-3;
  double lambda_v = 1e-2;
  double lambda_l = 1e-3;

  void validate() const {
    TFG_CHECK(lambda_i >= 0 && lambda_v >= 0 && lambda_l >= 0, "loss weights must be >= 0");
    TFG_CHECK(std::isfinite(lambda_i) && std::isfinite(lambda_v) && std::isfinite(lambda_l),
              "loss weights must be finite");
  }
};

// Per-step scalar record; one CSV row per training step.
struct LossReport {
  double l_rec = 0;
  double l_i_g = 0, l_v_g = 0, l_l_g = 0;
  double total_g = 0;
  double l_i_d = 0, l_v_d = 0, l_l_d = 0;

  bool finite() const {
    for (double v : {l_rec, l_i_g, l_v_g, l_l_g, total_g, l_i_d, l_v_d, l_l_d})
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// reconstruction: mean absolute difference over all pixels and timesteps

template <typename S>
double recon_loss(const std::vector<FeatureMap<S>> &generated,
                  const std::vector<FeatureMap<S>> &truth) {
  TFG_CHECK(generated.size() == truth.size() && !generated.empty(),
            "recon_loss: sequence length mismatch");
  double acc = 0;
  int64_t count = 0;
  for (size_t t = 0; t < generated.size(); ++t) {
    TFG_CHECK(generated[t].same_shape(truth[t]), "recon_loss: frame shape mismatch at ", t);
    acc += double((generated[t].v - truth[t].v).template lpNorm<1>());
    count += generated[t].size();
  }
  return acc / double(count);
}

// Adds weight * dL/dgenerated into grads (grads must be pre-sized).
template <typename S>
double recon_loss_backward(const std::vector<FeatureMap<S>> &generated,
                           const std::vector<FeatureMap<S>> &truth, double weight,
                           std::vector<FeatureMap<S>> *grads) {
  TFG_CHECK(grads != nullptr && grads->size() == generated.size(), "recon grads not sized");
  int64_t count = 0;
  for (const auto &g : generated) count += g.size();
  double acc = 0;
  const S scale = S(weight / double(count));
  for (size_t t = 0; t < generated.size(); ++t) {
    const Mat<S> diff = generated[t].v - truth[t].v;
    acc += double(diff.template lpNorm<1>());
    (*grads)[t].v.array() += scale * diff.array().sign();
  }
  return acc / double(count);
}

// ---------------------------------------------------------------------------
// GAN pair on probabilities (shared form for D_I and D_V). The discriminator
// minimizes the negated value function; the generator uses the
// non-saturating form.

inline void check_scores(const Vecd &s) {
  TFG_CHECK(s.size() > 0, "empty score vector");
  for (Eigen::Index i = 0; i < s.size(); ++i)
    TFG_CHECK(s(i) > 0.0 && s(i) < 1.0, "score ", s(i), " outside (0,1)");
}

inline double gan_disc_loss(const Vecd &real_scores, const Vecd &fake_scores) {
  check_scores(real_scores);
  check_scores(fake_scores);
  const double lr = real_scores.array().log().mean();
  const double lf = (1.0 - fake_scores.array()).log().mean();
  return -lr - lf;
}

inline double gan_gen_loss(const Vecd &fake_scores) {
  check_scores(fake_scores);
  return -fake_scores.array().log().mean();
}

// Logit-space twins used on the training path; identical values, stable at
// saturation. softplus(x) = log(1 + e^x) evaluated without overflow.
template <typename S>
S softplus(S x) {
  return x > S(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

template <typename S>
S sigmoid_scalar(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

// -mean log sig(real) - mean log(1 - sig(fake)); optional grads w.r.t logits
template <typename S>
S gan_disc_loss_logits(const Vec<S> &real_logits, const Vec<S> &fake_logits, Vec<S> *greal,
                       Vec<S> *gfake) {
  TFG_CHECK(real_logits.size() > 0 && fake_logits.size() > 0, "empty logit vector");
  S acc = 0;
  for (Eigen::Index i = 0; i < real_logits.size(); ++i) acc += softplus(-real_logits(i));
  S loss = acc / S(real_logits.size());
  acc = 0;
  for (Eigen::Index i = 0; i < fake_logits.size(); ++i) acc += softplus(fake_logits(i));
  loss += acc / S(fake_logits.size());
  if (greal != nullptr) {
    greal->resize(real_logits.size());
    for (Eigen::Index i = 0; i < real_logits.size(); ++i)
      (*greal)(i) = (sigmoid_scalar(real_logits(i)) - S(1)) / S(real_logits.size());
  }
  if (gfake != nullptr) {
    gfake->resize(fake_logits.size());
    for (Eigen::Index i = 0; i < fake_logits.size(); ++i)
      (*gfake)(i) = sigmoid_scalar(fake_logits(i)) / S(fake_logits.size());
  }
  return loss;
}

// -mean log sig(fake)
template <typename S>
S gan_gen_loss_logits(const Vec<S> &fake_logits, Vec<S> *gfake) {
  TFG_CHECK(fake_logits.size() > 0, "empty logit vector");
  S acc = 0;
  for (Eigen::Index i = 0; i < fake_logits.size(); ++i) acc += softplus(-fake_logits(i));
  if (gfake != nullptr) {
    gfake->resize(fake_logits.size());
    for (Eigen::Index i = 0; i < fake_logits.size(); ++i)
      (*gfake)(i) = (sigmoid_scalar(fake_logits(i)) - S(1)) / S(fake_logits.size());
  }
  return acc / S(fake_logits.size());
}

// ---------------------------------------------------------------------------
// lip-reading objectives (cross entropy over word logits)

template <typename S>
S cross_entropy_logits(const Vec<S> &logits, int label, Vec<S> *grad) {
  TFG_CHECK(label >= 0 && label < logits.size(), "label ", label, " out of range [0,",
            logits.size(), ")");
  const S m = logits.maxCoeff();
  Vec<S> shifted = logits.array() - m;
  const S lse = std::log(shifted.array().exp().sum());
  const S loss = lse - shifted(label);
  if (grad != nullptr) {
    *grad = (shifted.array() - lse).exp().matrix();  // softmax
    (*grad)(label) -= S(1);
  }
  return loss;
}

// Discriminator side: real sequences are pushed toward their labels, fake
// sequences away, with the repulsion clamped at 2 ln V so it cannot diverge.
template <typename S>
S lipread_disc_loss(const Vec<S> &real_logits, const Vec<S> &fake_logits, int label,
                    Vec<S> *greal, Vec<S> *gfake) {
  TFG_CHECK(real_logits.size() == fake_logits.size(), "logit length mismatch");
  const S clamp_c = S(2.0 * std::log(double(real_logits.size())));
  const S ce_real = cross_entropy_logits(real_logits, label, greal);
  Vec<S> gf;
  const S ce_fake = cross_entropy_logits(fake_logits, label, gfake ? &gf : nullptr);
  S loss;
  if (ce_fake < clamp_c) {
    loss = ce_real - ce_fake;
    if (gfake != nullptr) *gfake = -gf;
  } else {
    loss = ce_real - clamp_c;  // clamp active: no gradient through the fake term
    if (gfake != nullptr) *gfake = Vec<S>::Zero(fake_logits.size());
  }
  return loss;
}

// Generator side: rewarded when the lip reader decodes the right word from
// generated lips.
template <typename S>
S lipread_gen_loss(const Vec<S> &fake_logits, int label, Vec<S> *gfake) {
  return cross_entropy_logits(fake_logits, label, gfake);
}

// ---------------------------------------------------------------------------
// Eq. 5 combination; the lip term applies to labeled samples only

inline double total_gen_loss(double l_rec, double l_i, double l_v, double l_l,
                             const LossWeights &w, bool has_label) {
  w.validate();
  TFG_CHECK(std::isfinite(l_rec) && std::isfinite(l_i) && std::isfinite(l_v) &&
                (std::isfinite(l_l) || !has_label),
            "non-finite loss part");
  double total = l_rec + w.lambda_i * l_i + w.lambda_v * l_v;
  if (has_label) total += w.lambda_l * l_l;
  return total;
}

}  // namespace tfg::loss

#endif  // TFG_LOSS_LOSSES_HPP_
