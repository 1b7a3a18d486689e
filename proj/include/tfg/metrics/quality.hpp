// metrics/quality.hpp

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

#ifndef TFG_METRICS_QUALITY_HPP_
#define TFG_METRICS_QUALITY_HPP_

#include <vector>

#include "tfg/core/image.hpp"

namespace tfg::metrics {

// Identical images report the sentinel cap instead of infinity.
constexpr double kPsnrCapDb = 100.0;

// Peak signal-to-noise ratio on the 8-bit scale (values mapped from [-1,1]
// to [0,255] before the MSE).
double psnr(const Image &a, const Image &b);

// Mean local SSIM on grayscale, 11x11 Gaussian window sigma 1.5,
// K1=0.01 K2=0.03, L=255; window centers where the full window fits.
double ssim(const Image &a, const Image &b);

// Landmark distance error: mean Euclidean distance over frames and points.
double lmd(const std::vector<Matd> &predicted, const std::vector<Matd> &truth);

struct LipReadingAccuracy {
  double top1 = 0.0;
  double top5 = 0.0;
  int count = 0;
};

// Fraction of samples whose label is the argmax / among the 5 largest logits.
LipReadingAccuracy lip_reading_accuracy(const std::vector<Vecd> &logits,
                                        const std::vector<int> &labels);

}  // namespace tfg::metrics

#endif  // TFG_METRICS_QUALITY_HPP_
