// metrics/aperture.cpp

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

#include "tfg/metrics/aperture.hpp"

#include <cmath>

namespace tfg::metrics {

Vecd mouth_aperture_series(const std::vector<Image> &frames, const data::MouthBox &box,
                           double dark_luma_threshold) {
  TFG_CHECK(!frames.empty(), "empty frame sequence");
  Vecd series(Eigen::Index(frames.size()));
  for (size_t t = 0; t < frames.size(); ++t) {
    const Image &f = frames[t];
    TFG_CHECK(box.x0 >= 0 && box.y0 >= 0 && box.x0 + box.size <= f.w &&
                  box.y0 + box.size <= f.h,
              "mouth box outside the frame");
    int best = 0;
    for (int x = box.x0; x < box.x0 + box.size; ++x) {
      int run = 0, col_best = 0;
      for (int y = box.y0; y < box.y0 + box.size; ++y) {
        const double luma = 0.299 * f.at(0, y, x) + 0.587 * f.at(1, y, x) + 0.114 * f.at(2, y, x);
        if (luma < dark_luma_threshold) {
          ++run;
          col_best = std::max(col_best, run);
        } else {
          run = 0;
        }
      }
      best = std::max(best, col_best);
    }
    series(Eigen::Index(t)) = double(best);
  }
  return series;
}

double pearson(const Vecd &a, const Vecd &b, bool *degenerate) {
  TFG_CHECK(a.size() == b.size() && a.size() >= 2, "pearson: bad series");
  const double ma = a.mean(), mb = b.mean();
  const Vecd da = a.array() - ma, db = b.array() - mb;
  const double va = da.squaredNorm(), vb = db.squaredNorm();
  if (va < 1e-12 || vb < 1e-12) {
    if (degenerate != nullptr) *degenerate = true;
    return std::nan("");
  }
  if (degenerate != nullptr) *degenerate = false;
  return da.dot(db) / std::sqrt(va * vb);
}

ApertureCorrelation aperture_correlation(const std::vector<Image> &frames,
                                         const Vecd &truth_envelope, const data::MouthBox &box) {
  TFG_CHECK(Eigen::Index(frames.size()) == truth_envelope.size(),
            "envelope length does not match frame count");
  const Vecd measured = mouth_aperture_series(frames, box);
  ApertureCorrelation out;
  out.r = pearson(measured, truth_envelope, &out.degenerate);
  return out;
}

std::vector<Matd> landmarks_from_frames(const std::vector<Image> &frames,
                                        const data::SyntheticAvatarConfig &cfg) {
  // mouth center from the centroid of dark pixels (the opening tracks head
  // pose); configured center is the fallback when the mouth reads closed
  const data::MouthBox box = data::mouth_box(cfg);
  const Vecd aperture = mouth_aperture_series(frames, box);
  std::vector<Matd> out;
  out.reserve(frames.size());
  for (size_t t = 0; t < frames.size(); ++t) {
    const Image &f = frames[t];
    double cx_sum = 0, cy_sum = 0;
    int64_t n = 0;
    for (int y = box.y0; y < box.y0 + box.size; ++y) {
      for (int x = box.x0; x < box.x0 + box.size; ++x) {
        const double luma =
            0.299 * f.at(0, y, x) + 0.587 * f.at(1, y, x) + 0.114 * f.at(2, y, x);
        if (luma < -0.5) {
          cx_sum += x;
          cy_sum += y;
          ++n;
        }
      }
    }
    const double cx = n > 0 ? cx_sum / double(n) : double(cfg.mouth_center_x);
    const double cy = n > 0 ? cy_sum / double(n) : double(cfg.mouth_center_y);
    const double a = aperture(Eigen::Index(t));
    Matd lm(4, 2);
    lm << cx - cfg.mouth_width / 2.0, cy,  //
        cx + cfg.mouth_width / 2.0, cy,    //
        cx, cy - a / 2.0,                  //
        cx, cy + a / 2.0;
    out.push_back(lm);
  }
  return out;
}

}  // namespace tfg::metrics
