// metrics/flow.hpp

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

#ifndef TFG_METRICS_FLOW_HPP_
#define TFG_METRICS_FLOW_HPP_

#include <vector>

#include "tfg/core/image.hpp"

namespace tfg::metrics {

struct FlowField {
  Matd u, v;  // per-pixel displacement, x and y components
};

struct FlowConfig {
  int iterations = 100;
  double regularization = 0.1;  // additive smoothness weight in the update
};

// Dense brightness-constancy + smoothness flow (classic variational scheme,
// Jacobi iterations with a fixed count). Deterministic.
FlowField optical_flow(const Image &f1, const Image &f2, const FlowConfig &cfg = {});

struct MotionIntensityMap {
  Matd map;  // per-pixel mean of u^2 + v^2 over consecutive pairs
  int frames_used = 0;
};

MotionIntensityMap motion_intensity(const std::vector<Image> &frames,
                                    const FlowConfig &cfg = {});

// Same aggregation over precomputed fields (sign invariance checks).
MotionIntensityMap motion_intensity_from_fields(const std::vector<FlowField> &fields, int h,
                                                int w);

}  // namespace tfg::metrics

#endif  // TFG_METRICS_FLOW_HPP_
