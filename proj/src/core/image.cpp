// core/image.cpp

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

#include "tfg/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace tfg {

Image image_from_u8(const std::vector<uint8_t> &rgb, int h, int w) {
  TFG_CHECK(int64_t(rgb.size()) == int64_t(h) * w * 3, "u8 buffer size mismatch: ", rgb.size(),
            " vs ", int64_t(h) * w * 3);
  Image img(3, h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t base = (size_t(y) * w + x) * 3;
      for (int ch = 0; ch < 3; ++ch) {
        img.at(ch, y, x) = (float(rgb[base + ch]) - 127.5f) / 127.5f;
      }
    }
  }
  return img;
}

std::vector<uint8_t> image_to_u8(const Image &img) {
  TFG_CHECK(img.c == 3, "expected 3-channel image, got ", img.c);
  std::vector<uint8_t> rgb(size_t(img.h) * img.w * 3);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) {
      const size_t base = (size_t(y) * img.w + x) * 3;
      for (int ch = 0; ch < 3; ++ch) {
        float v = img.at(ch, y, x) * 127.5f + 127.5f;
        v = std::clamp(v, 0.0f, 255.0f);
        rgb[base + ch] = uint8_t(std::lround(v));
      }
    }
  }
  return rgb;
}

Matf to_gray(const Image &img) {
  if (img.c == 1) {
    Matf g(img.h, img.w);
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x) g(y, x) = img.at(0, y, x);
    return g;
  }
  TFG_CHECK(img.c == 3, "to_gray expects 1 or 3 channels, got ", img.c);
  Matf g(img.h, img.w);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) {
      g(y, x) = 0.299f * img.at(0, y, x) + 0.587f * img.at(1, y, x) + 0.114f * img.at(2, y, x);
    }
  }
  return g;
}

float bilinear_at(const Image &img, int ch, float y, float x) {
  const float yc = std::clamp(y, 0.0f, float(img.h - 1));
  const float xc = std::clamp(x, 0.0f, float(img.w - 1));
  const int y0 = int(std::floor(yc));
  const int x0 = int(std::floor(xc));
  const int y1 = std::min(y0 + 1, img.h - 1);
  const int x1 = std::min(x0 + 1, img.w - 1);
  const float fy = yc - float(y0);
  const float fx = xc - float(x0);
  const float a = img.at(ch, y0, x0) * (1 - fx) + img.at(ch, y0, x1) * fx;
  const float b = img.at(ch, y1, x0) * (1 - fx) + img.at(ch, y1, x1) * fx;
  return a * (1 - fy) + b * fy;
}

Image bilinear_resize(const Image &img, int out_h, int out_w) {
  TFG_CHECK(out_h > 0 && out_w > 0, "bad resize target ", out_h, "x", out_w);
  if (out_h == img.h && out_w == img.w) return img;
  Image out(img.c, out_h, out_w);
  const float sy = float(img.h) / float(out_h);
  const float sx = float(img.w) / float(out_w);
  for (int ch = 0; ch < img.c; ++ch) {
    for (int y = 0; y < out_h; ++y) {
      const float src_y = (float(y) + 0.5f) * sy - 0.5f;
      for (int x = 0; x < out_w; ++x) {
        const float src_x = (float(x) + 0.5f) * sx - 0.5f;
        out.at(ch, y, x) = bilinear_at(img, ch, src_y, src_x);
      }
    }
  }
  return out;
}

bool in_unit_range(const Image &img, float tol) {
  return img.v.minCoeff() >= -1.0f - tol && img.v.maxCoeff() <= 1.0f + tol;
}

}  // namespace tfg
