// io/png_io.hpp

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

#ifndef TFG_IO_PNG_IO_HPP_
#define TFG_IO_PNG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace tfg {

struct PngImage {
  std::vector<uint8_t> rgb;  // interleaved, row-major
  int h = 0, w = 0;
};

// 8-bit decode; gray/palette/alpha inputs are expanded to RGB.
PngImage read_png(const std::string &path);

// 8-bit RGB encode with fixed settings, so equal pixels give equal bytes.
void write_png_rgb(const std::string &path, const std::vector<uint8_t> &rgb, int h, int w);

// 8-bit grayscale encode (metric maps).
void write_png_gray(const std::string &path, const std::vector<uint8_t> &gray, int h, int w);

}  // namespace tfg

#endif  // TFG_IO_PNG_IO_HPP_
