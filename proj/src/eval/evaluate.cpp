// eval/evaluate.cpp

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

#include "tfg/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "tfg/io/png_io.hpp"
#include "tfg/metrics/aperture.hpp"

namespace tfg::eval {

namespace {

std::vector<int> cap_indices(std::vector<int> idx, int max_clips) {
  if (max_clips > 0 && int(idx.size()) > max_clips) idx.resize(size_t(max_clips));
  return idx;
}

std::vector<Matf> normalized_windows(const audio::FeatureNormStats &norm,
                                     const data::TalkingFaceSample &s) {
  std::vector<Matf> out;
  out.reserve(s.audio_features.windows.size());
  for (const audio::MfccWindow &w : s.audio_features.windows)
    out.push_back(norm.apply(w.coeffs).cast<float>());
  return out;
}

}  // namespace

std::vector<Image> generate_for_sample(model::Generator<float> &gen,
                                       const audio::FeatureNormStats &norm,
                                       const data::TalkingFaceSample &sample) {
  const Image identity =
      data::select_identity(sample, data::IdentityMode::kFirst, /*seed=*/0);
  return gen.generate(identity, normalized_windows(norm, sample), /*train=*/false);
}

nlohmann::json evaluate_generator(model::Generator<float> &gen,
                                  const audio::FeatureNormStats &norm,
                                  const data::Corpus &corpus, model::LipReader<float> *judge,
                                  const EvalOptions &opts) {
  const std::vector<int> indices = cap_indices(corpus.split_indices(opts.split), opts.max_clips);
  TFG_CHECK(!indices.empty(), "no clips in split '", opts.split, "'");
  const data::SyntheticAvatarConfig *synth = corpus.synthetic_config();

  double psnr_sum = 0, ssim_sum = 0, lmd_sum = 0, ap_sum = 0;
  int lmd_count = 0, ap_count = 0, ap_degenerate = 0;
  std::vector<Vecd> judge_logits;
  std::vector<int> judge_labels;
  nlohmann::json per_sample = nlohmann::json::array();
  std::vector<std::string> skipped;

  for (int idx : indices) {
    const data::TalkingFaceSample sample = corpus.load(idx);
    const std::vector<Image> fake = generate_for_sample(gen, norm, sample);

    double clip_psnr = 0, clip_ssim = 0;
    for (int t = 0; t < sample.length(); ++t) {
      clip_psnr += metrics::psnr(fake[size_t(t)], sample.frames[size_t(t)]);
      clip_ssim += metrics::ssim(fake[size_t(t)], sample.frames[size_t(t)]);
    }
    clip_psnr /= sample.length();
    clip_ssim /= sample.length();
    psnr_sum += clip_psnr;
    ssim_sum += clip_ssim;

    nlohmann::json row;
    row["id"] = sample.id;
    row["psnr"] = clip_psnr;
    row["ssim"] = clip_ssim;

    if (sample.has_landmarks && synth != nullptr) {
      const std::vector<Matd> pred = metrics::landmarks_from_frames(fake, *synth);
      const double clip_lmd = metrics::lmd(pred, sample.landmarks);
      lmd_sum += clip_lmd;
      ++lmd_count;
      row["lmd"] = clip_lmd;

      const Vecd envelope = data::envelope_from_landmarks(sample, synth->aperture_gain_px);
      const auto corr = metrics::aperture_correlation(fake, envelope, data::mouth_box(*synth));
      if (corr.degenerate) {
        ++ap_degenerate;
        row["aperture_correlation"] = nullptr;
      } else {
        ap_sum += corr.r;
        ++ap_count;
        row["aperture_correlation"] = corr.r;
      }
    }

    if (judge != nullptr && sample.has_label) {
      auto mouth = model::crop_mouth(fake, sample.has_landmarks ? &sample.landmarks : nullptr,
                                     judge->forward_crop_size());
      const Vecf logits = judge->forward(stack_frames(mouth.crops), false);
      judge_logits.push_back(logits.cast<double>());
      judge_labels.push_back(sample.word_label);
    }
    if (opts.per_sample) per_sample.push_back(row);
  }

  nlohmann::json metrics_block;
  metrics_block["clips"] = int(indices.size());
  metrics_block["psnr"] = psnr_sum / double(indices.size());
  metrics_block["ssim"] = ssim_sum / double(indices.size());
  if (lmd_count > 0) {
    metrics_block["lmd"] = lmd_sum / lmd_count;
  } else {
    skipped.push_back("lmd (no ground-truth landmarks)");
  }
  if (ap_count > 0) {
    metrics_block["aperture_correlation"] = ap_sum / ap_count;
    metrics_block["aperture_degenerate_clips"] = ap_degenerate;
  } else if (lmd_count == 0) {
    skipped.push_back("aperture_correlation (no ground-truth landmarks)");
  } else {
    metrics_block["aperture_degenerate_clips"] = ap_degenerate;
    skipped.push_back("aperture_correlation (all clips degenerate)");
  }
  if (!judge_logits.empty() && judge_logits.front().size() >= 5) {
    const auto lra = metrics::lip_reading_accuracy(judge_logits, judge_labels);
    metrics_block["lra_top1"] = lra.top1;
    metrics_block["lra_top5"] = lra.top5;
  } else if (!judge_logits.empty()) {
    // vocabulary below five classes: top-1 only
    int correct = 0;
    for (size_t i = 0; i < judge_logits.size(); ++i) {
      Eigen::Index best;
      judge_logits[i].maxCoeff(&best);
      if (int(best) == judge_labels[i]) ++correct;
    }
    metrics_block["lra_top1"] = double(correct) / double(judge_logits.size());
    skipped.push_back("lra_top5 (vocabulary below 5 classes)");
  } else if (judge == nullptr) {
    skipped.push_back("lra (no lip-reading classifier provided)");
  } else {
    skipped.push_back("lra (no labeled clips)");
  }

  for (const std::string &s : skipped) std::cerr << "[evaluate] warning: skipped " << s << "\n";

  nlohmann::json report;
  report["split"] = opts.split;
  report["metrics"] = metrics_block;
  report["skipped"] = skipped;
  if (opts.per_sample) report["per_sample"] = per_sample;
  return report;
}

MotionSummary generator_motion_stats(model::Generator<float> &gen,
                                     const audio::FeatureNormStats &norm,
                                     const data::Corpus &corpus,
                                     const std::vector<int> &indices, int max_clips) {
  const data::SyntheticAvatarConfig *synth = corpus.synthetic_config();
  TFG_CHECK(synth != nullptr, "motion stats need the synthetic mouth geometry");
  const std::vector<int> use = cap_indices(indices, max_clips);
  TFG_CHECK(!use.empty(), "no clips for motion stats");

  MotionSummary out;
  for (int idx : use) {
    const data::TalkingFaceSample sample = corpus.load(idx);
    const std::vector<Image> fake = generate_for_sample(gen, norm, sample);
    const metrics::MotionIntensityMap m = metrics::motion_intensity(fake);
    if (out.map.size() == 0) out.map = Matd::Zero(m.map.rows(), m.map.cols());
    out.map += m.map;
  }
  out.map /= double(use.size());
  out.clips = int(use.size());

  const data::MouthBox box = data::mouth_box(*synth);
  double in_sum = 0, out_sum = 0;
  int64_t in_n = 0, out_n = 0;
  for (int y = 0; y < out.map.rows(); ++y) {
    for (int x = 0; x < out.map.cols(); ++x) {
      const bool inside = x >= box.x0 && x < box.x0 + box.size && y >= box.y0 &&
                          y < box.y0 + box.size;
      if (inside) {
        in_sum += out.map(y, x);
        ++in_n;
      } else {
        out_sum += out.map(y, x);
        ++out_n;
      }
    }
  }
  out.inside_mean = in_sum / double(in_n);
  out.outside_mean = out_sum / double(out_n);
  return out;
}

double identity_drift_final_quarter(model::Generator<float> &gen,
                                    const audio::FeatureNormStats &norm,
                                    const data::Corpus &corpus, const std::vector<int> &indices,
                                    int max_clips) {
  const std::vector<int> use = cap_indices(indices, max_clips);
  TFG_CHECK(!use.empty(), "no clips for identity drift");
  double acc = 0;
  int64_t frames = 0;
  for (int idx : use) {
    const data::TalkingFaceSample sample = corpus.load(idx);
    const Image identity = data::select_identity(sample, data::IdentityMode::kFirst, 0);
    const std::vector<Image> fake = generate_for_sample(gen, norm, sample);
    const int k = int(fake.size());
    for (int t = (3 * k) / 4; t < k; ++t) {
      acc += double((fake[size_t(t)].v - identity.v).lpNorm<1>()) / double(identity.size());
      ++frames;
    }
  }
  return acc / double(frames);
}

metrics::LipReadingAccuracy generated_lip_accuracy(model::Generator<float> &gen,
                                                   const audio::FeatureNormStats &norm,
                                                   const data::Corpus &corpus,
                                                   model::LipReader<float> &judge,
                                                   const std::vector<int> &indices,
                                                   int max_clips) {
  const std::vector<int> use = cap_indices(indices, max_clips);
  std::vector<Vecd> logits;
  std::vector<int> labels;
  for (int idx : use) {
    const data::TalkingFaceSample sample = corpus.load(idx);
    if (!sample.has_label) continue;
    const std::vector<Image> fake = generate_for_sample(gen, norm, sample);
    auto mouth = model::crop_mouth(fake, sample.has_landmarks ? &sample.landmarks : nullptr,
                                   judge.forward_crop_size());
    logits.push_back(judge.forward(stack_frames(mouth.crops), false).cast<double>());
    labels.push_back(sample.word_label);
  }
  TFG_CHECK(!logits.empty(), "no labeled clips for lip-reading accuracy");
  return metrics::lip_reading_accuracy(logits, labels);
}

double generated_aperture_correlation(model::Generator<float> &gen,
                                      const audio::FeatureNormStats &norm,
                                      const data::Corpus &corpus,
                                      const std::vector<int> &indices, int max_clips,
                                      int *degenerate_out) {
  const data::SyntheticAvatarConfig *synth = corpus.synthetic_config();
  TFG_CHECK(synth != nullptr, "aperture correlation needs the synthetic geometry");
  const std::vector<int> use = cap_indices(indices, max_clips);
  double sum = 0;
  int n = 0, degenerate = 0;
  for (int idx : use) {
    const data::TalkingFaceSample sample = corpus.load(idx);
    const std::vector<Image> fake = generate_for_sample(gen, norm, sample);
    const Vecd env = data::envelope_from_landmarks(sample, synth->aperture_gain_px);
    const auto corr = metrics::aperture_correlation(fake, env, data::mouth_box(*synth));
    if (corr.degenerate) {
      ++degenerate;
    } else {
      sum += corr.r;
      ++n;
    }
  }
  if (degenerate_out != nullptr) *degenerate_out = degenerate;
  TFG_CHECK(n > 0, "all clips degenerate in aperture correlation");
  return sum / double(n);
}

void write_motion_map_png(const std::string &path, const Matd &map) {
  const double peak = std::max(1e-12, map.maxCoeff());
  std::vector<uint8_t> gray(size_t(map.rows()) * size_t(map.cols()));
  for (int y = 0; y < map.rows(); ++y)
    for (int x = 0; x < map.cols(); ++x)
      gray[size_t(y) * size_t(map.cols()) + size_t(x)] =
          uint8_t(std::lround(255.0 * std::clamp(map(y, x) / peak, 0.0, 1.0)));
  write_png_gray(path, gray, int(map.rows()), int(map.cols()));
}

}  // namespace tfg::eval
