// core/image.hpp

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

#ifndef TFG_CORE_IMAGE_HPP_
#define TFG_CORE_IMAGE_HPP_

#include <cstdint>
#include <vector>

#include "tfg/core/tensor.hpp"

namespace tfg {

// Images are RGB FeatureMaps with values in [-1, 1].
using Image = FeatureMap<float>;

// Interleaved 8-bit RGB <-> [-1,1] float image. u8 -> float -> u8 is exact.
Image image_from_u8(const std::vector<uint8_t> &rgb, int h, int w);
std::vector<uint8_t> image_to_u8(const Image &img);

// Rec.601 luma on an arbitrary scale: out = 0.299 R + 0.587 G + 0.114 B.
// Single-channel inputs pass through.
Matf to_gray(const Image &img);

// Bilinear sample of channel ch at real coordinates (y, x), edge-clamped.
float bilinear_at(const Image &img, int ch, float y, float x);

// Bilinear resize to (out_h, out_w); align-corners-false convention.
Image bilinear_resize(const Image &img, int out_h, int out_w);

// [-1,1] range check with tolerance for accumulated rounding.
bool in_unit_range(const Image &img, float tol = 1e-4f);

}  // namespace tfg

#endif  // TFG_CORE_IMAGE_HPP_
