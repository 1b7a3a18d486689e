// metrics/quality.cpp

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

#include "tfg/metrics/quality.hpp"

#include <algorithm>
#include <cmath>

namespace tfg::metrics {

namespace {

// grayscale on [0, 255]
Matd gray255(const Image &img) {
  const Matf g = to_gray(img);
  return ((g.array().cast<double>() + 1.0) * 127.5).matrix();
}

}  // namespace

double psnr(const Image &a, const Image &b) {
  TFG_CHECK(a.same_shape(b), "psnr: shape mismatch");
  double mse = 0.0;
  for (int ch = 0; ch < a.c; ++ch) {
    for (int y = 0; y < a.h; ++y) {
      for (int x = 0; x < a.w; ++x) {
        const double d = (double(a.at(ch, y, x)) - double(b.at(ch, y, x))) * 127.5;
        mse += d * d;
      }
    }
  }
  mse /= double(a.size());
  if (mse <= 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const Image &a, const Image &b) {
  TFG_CHECK(a.same_shape(b), "ssim: shape mismatch");
  constexpr int kWin = 11;
  constexpr double kSigma = 1.5;
  constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
  TFG_CHECK(a.h >= kWin && a.w >= kWin, "ssim: image ", a.h, "x", a.w,
            " smaller than the ", kWin, "x", kWin, " window");

  const Matd ga = gray255(a), gb = gray255(b);

  Vecd kernel(kWin);
  for (int i = 0; i < kWin; ++i) {
    const double d = double(i - kWin / 2);
    kernel(i) = std::exp(-d * d / (2.0 * kSigma * kSigma));
  }
  kernel /= kernel.sum();
  const Matd w2d = kernel * kernel.transpose();

  const int oh = a.h - kWin + 1, ow = a.w - kWin + 1;
  double acc = 0.0;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
      for (int i = 0; i < kWin; ++i) {
        for (int j = 0; j < kWin; ++j) {
          const double wa = ga(y + i, x + j), wb = gb(y + i, x + j), wt = w2d(i, j);
          mu_a += wt * wa;
          mu_b += wt * wb;
          aa += wt * wa * wa;
          bb += wt * wb * wb;
          ab += wt * wa * wb;
        }
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      acc += ((2 * mu_a * mu_b + kC1) * (2 * cov + kC2)) /
             ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
    }
  }
  return acc / double(oh * ow);
}

double lmd(const std::vector<Matd> &predicted, const std::vector<Matd> &truth) {
  TFG_CHECK(predicted.size() == truth.size() && !predicted.empty(),
            "lmd: frame count mismatch");
  double acc = 0.0;
  int64_t points = 0;
  for (size_t t = 0; t < predicted.size(); ++t) {
    TFG_CHECK(predicted[t].rows() == truth[t].rows() && predicted[t].cols() == 2 &&
                  truth[t].cols() == 2,
              "lmd: landmark count mismatch at frame ", t);
    for (Eigen::Index p = 0; p < predicted[t].rows(); ++p) {
      acc += (predicted[t].row(p) - truth[t].row(p)).norm();
      ++points;
    }
  }
  return acc / double(points);
}

LipReadingAccuracy lip_reading_accuracy(const std::vector<Vecd> &logits,
                                        const std::vector<int> &labels) {
  TFG_CHECK(logits.size() == labels.size() && !logits.empty(),
            "lip_reading_accuracy: size mismatch or empty input");
  LipReadingAccuracy out;
  out.count = int(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    const Vecd &l = logits[i];
    TFG_CHECK(l.size() >= 5, "top-5 accuracy needs at least 5 classes, got ", l.size());
    TFG_CHECK(labels[i] >= 0 && labels[i] < l.size(), "label out of range");
    std::vector<int> order(size_t(l.size()));
    for (size_t j = 0; j < order.size(); ++j) order[j] = int(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return l(x) > l(y); });
    if (order[0] == labels[i]) out.top1 += 1.0;
    for (int j = 0; j < 5; ++j) {
      if (order[size_t(j)] == labels[i]) {
        out.top5 += 1.0;
        break;
      }
    }
  }
  out.top1 /= double(out.count);
  out.top5 /= double(out.count);
  TFG_CHECK(out.top1 <= out.top5 + 1e-12, "top1 exceeded top5");
  return out;
}

}  // namespace tfg::metrics
