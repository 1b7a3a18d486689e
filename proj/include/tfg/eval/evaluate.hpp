// eval/evaluate.hpp

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

#ifndef TFG_EVAL_EVALUATE_HPP_
#define TFG_EVAL_EVALUATE_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "tfg/data/corpus.hpp"
#include "tfg/metrics/flow.hpp"
#include "tfg/metrics/quality.hpp"
#include "tfg/model/discriminators.hpp"
#include "tfg/model/generator.hpp"

namespace tfg::eval {

struct EvalOptions {
  std::string split = "test";
  int max_clips = 0;  // 0: every clip in the split
  bool per_sample = false;
};

// Generates frames for one sample at inference defaults (identity = frame 0)
// and returns them.
std::vector<Image> generate_for_sample(model::Generator<float> &gen,
                                       const audio::FeatureNormStats &norm,
                                       const data::TalkingFaceSample &sample);

// Full quantitative report: PSNR/SSIM always; LMD and aperture correlation
// when ground-truth landmarks exist; lip-reading accuracy when a judge and
// labels exist. Missing prerequisites skip the metric with a note.
nlohmann::json evaluate_generator(model::Generator<float> &gen,
                                  const audio::FeatureNormStats &norm,
                                  const data::Corpus &corpus, model::LipReader<float> *judge,
                                  const EvalOptions &opts);

// Mean motion-intensity map of generated sequences, split at the mouth box.
struct MotionSummary {
  Matd map;
  double inside_mean = 0.0;
  double outside_mean = 0.0;
  int clips = 0;
};
MotionSummary generator_motion_stats(model::Generator<float> &gen,
                                     const audio::FeatureNormStats &norm,
                                     const data::Corpus &corpus,
                                     const std::vector<int> &indices, int max_clips);

// Identity preservation: mean per-frame L1 distance between generated frames
// in the final quarter of each sequence and the identity image.
double identity_drift_final_quarter(model::Generator<float> &gen,
                                    const audio::FeatureNormStats &norm,
                                    const data::Corpus &corpus, const std::vector<int> &indices,
                                    int max_clips);

// Held-out lip reading of generated videos under a fixed judge.
metrics::LipReadingAccuracy generated_lip_accuracy(model::Generator<float> &gen,
                                                   const audio::FeatureNormStats &norm,
                                                   const data::Corpus &corpus,
                                                   model::LipReader<float> &judge,
                                                   const std::vector<int> &indices,
                                                   int max_clips);

// Mean aperture correlation of generated videos over a split (degenerate
// clips excluded, their count reported via *degenerate_out).
double generated_aperture_correlation(model::Generator<float> &gen,
                                      const audio::FeatureNormStats &norm,
                                      const data::Corpus &corpus,
                                      const std::vector<int> &indices, int max_clips,
                                      int *degenerate_out);

// Grayscale PNG of a motion map, normalized by its maximum.
void write_motion_map_png(const std::string &path, const Matd &map);

}  // namespace tfg::eval

#endif  // TFG_EVAL_EVALUATE_HPP_
