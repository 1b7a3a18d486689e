// metrics/flow.cpp

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

#include "tfg/metrics/flow.hpp"

#include <cmath>

namespace tfg::metrics {

namespace {

Matd gray255(const Image &img) {
  const Matf g = to_gray(img);
  TFG_CHECK(g.allFinite(), "optical_flow: non-finite input");
  return ((g.array().cast<double>() + 1.0) * 127.5).matrix();
}

inline double at_clamped(const Matd &m, int y, int x) {
  y = std::clamp(y, 0, int(m.rows()) - 1);
  x = std::clamp(x, 0, int(m.cols()) - 1);
  return m(y, x);
}

}  // namespace

FlowField optical_flow(const Image &f1, const Image &f2, const FlowConfig &cfg) {
  TFG_CHECK(f1.same_shape(f2), "optical_flow: shape mismatch");
  TFG_CHECK(cfg.iterations > 0 && cfg.regularization > 0, "bad flow config");
  const Matd g1 = gray255(f1), g2 = gray255(f2);
  const int h = f1.h, w = f1.w;

  // forward-difference stencils averaged over the space-time cube
  Matd ix(h, w), iy(h, w), it(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      ix(y, x) = 0.25 * (at_clamped(g1, y, x + 1) - at_clamped(g1, y, x) +
                         at_clamped(g1, y + 1, x + 1) - at_clamped(g1, y + 1, x) +
                         at_clamped(g2, y, x + 1) - at_clamped(g2, y, x) +
                         at_clamped(g2, y + 1, x + 1) - at_clamped(g2, y + 1, x));
      iy(y, x) = 0.25 * (at_clamped(g1, y + 1, x) - at_clamped(g1, y, x) +
                         at_clamped(g1, y + 1, x + 1) - at_clamped(g1, y, x + 1) +
                         at_clamped(g2, y + 1, x) - at_clamped(g2, y, x) +
                         at_clamped(g2, y + 1, x + 1) - at_clamped(g2, y, x + 1));
      it(y, x) = 0.25 * (at_clamped(g2, y, x) - at_clamped(g1, y, x) +
                         at_clamped(g2, y + 1, x) - at_clamped(g1, y + 1, x) +
                         at_clamped(g2, y, x + 1) - at_clamped(g1, y, x + 1) +
                         at_clamped(g2, y + 1, x + 1) - at_clamped(g1, y + 1, x + 1));
    }
  }

  FlowField f;
  f.u = Matd::Zero(h, w);
  f.v = Matd::Zero(h, w);
  Matd ubar(h, w), vbar(h, w);
  auto neighbor_avg = [&](const Matd &m, int y, int x) {
    // weighted 8-neighborhood: 1/6 edges, 1/12 diagonals
    return (at_clamped(m, y - 1, x) + at_clamped(m, y + 1, x) + at_clamped(m, y, x - 1) +
            at_clamped(m, y, x + 1)) /
               6.0 +
           (at_clamped(m, y - 1, x - 1) + at_clamped(m, y - 1, x + 1) +
            at_clamped(m, y + 1, x - 1) + at_clamped(m, y + 1, x + 1)) /
               12.0;
  };

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        ubar(y, x) = neighbor_avg(f.u, y, x);
        vbar(y, x) = neighbor_avg(f.v, y, x);
      }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double denom =
            cfg.regularization + ix(y, x) * ix(y, x) + iy(y, x) * iy(y, x);
        const double term = (ix(y, x) * ubar(y, x) + iy(y, x) * vbar(y, x) + it(y, x)) / denom;
        f.u(y, x) = ubar(y, x) - ix(y, x) * term;
        f.v(y, x) = vbar(y, x) - iy(y, x) * term;
      }
    }
  }
  return f;
}

MotionIntensityMap motion_intensity(const std::vector<Image> &frames, const FlowConfig &cfg) {
  TFG_CHECK(frames.size() >= 2, "motion_intensity needs at least 2 frames, got ",
            frames.size());
  MotionIntensityMap out;
  out.map = Matd::Zero(frames[0].h, frames[0].w);
  for (size_t t = 0; t + 1 < frames.size(); ++t) {
    const FlowField f = optical_flow(frames[t], frames[t + 1], cfg);
    out.map += f.u.cwiseProduct(f.u) + f.v.cwiseProduct(f.v);
  }
  out.map /= double(frames.size() - 1);
  out.frames_used = int(frames.size());
  return out;
}

MotionIntensityMap motion_intensity_from_fields(const std::vector<FlowField> &fields, int h,
                                                int w) {
  TFG_CHECK(!fields.empty(), "no flow fields given");
  MotionIntensityMap out;
  out.map = Matd::Zero(h, w);
  for (const FlowField &f : fields) {
    out.map += f.u.cwiseProduct(f.u) + f.v.cwiseProduct(f.v);
  }
  out.map /= double(fields.size());
  out.frames_used = int(fields.size()) + 1;
  return out;
}

}  // namespace tfg::metrics
