// metrics/aperture.hpp

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

#ifndef TFG_METRICS_APERTURE_HPP_
#define TFG_METRICS_APERTURE_HPP_

#include <vector>

#include "tfg/data/synthetic.hpp"

namespace tfg::metrics {

// Mouth-opening height per frame: the tallest per-column run of dark pixels
// (luma below the threshold) inside the known mouth box.
Vecd mouth_aperture_series(const std::vector<Image> &frames, const data::MouthBox &box,
                           double dark_luma_threshold = -0.5);

struct ApertureCorrelation {
  double r = 0.0;
  bool degenerate = false;  // constant series on either side
};

// Desk-scale lip-sync proxy: Pearson correlation between the measured mouth
// opening and the driving audio envelope.
ApertureCorrelation aperture_correlation(const std::vector<Image> &frames,
                                         const Vecd &truth_envelope, const data::MouthBox &box);

// Landmark estimates for generated frames: corners at the configured mouth
// geometry, lip points split by the measured aperture.
std::vector<Matd> landmarks_from_frames(const std::vector<Image> &frames,
                                        const data::SyntheticAvatarConfig &cfg);

double pearson(const Vecd &a, const Vecd &b, bool *degenerate);

}  // namespace tfg::metrics

#endif  // TFG_METRICS_APERTURE_HPP_
