// io/png_io.cpp

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

#include "tfg/io/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "tfg/core/common.hpp"

namespace tfg {

namespace {

struct FileCloser {
  void operator()(FILE *f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

}  // namespace

PngImage read_png(const std::string &path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  TFG_CHECK(fp != nullptr, "cannot open PNG: ", path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  TFG_CHECK(png, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(strcat_msg("PNG decode error: ", path));
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  PngImage out;
  out.h = int(h);
  out.w = int(w);
  out.rgb.resize(size_t(h) * w * 3);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = out.rgb.data() + size_t(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

namespace {

void write_png_impl(const std::string &path, const uint8_t *data, int h, int w, int color_type,
                    int channels) {
  TFG_CHECK(h > 0 && w > 0, "bad PNG dimensions ", h, "x", w);
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  TFG_CHECK(fp != nullptr, "cannot write PNG: ", path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  TFG_CHECK(png, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(strcat_msg("PNG encode error: ", path));
  }

  png_init_io(png, fp.get());
  // pinned encoder settings keep output byte-stable for a given pixel buffer
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, png_uint_32(w), png_uint_32(h), 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_bytep> rows(static_cast<size_t>(h), nullptr);
  for (int y = 0; y < h; ++y)
    rows[size_t(y)] = const_cast<png_bytep>(data + size_t(y) * w * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_rgb(const std::string &path, const std::vector<uint8_t> &rgb, int h, int w) {
  TFG_CHECK(rgb.size() == size_t(h) * w * 3, "RGB buffer size mismatch");
  write_png_impl(path, rgb.data(), h, w, PNG_COLOR_TYPE_RGB, 3);
}

void write_png_gray(const std::string &path, const std::vector<uint8_t> &gray, int h, int w) {
  TFG_CHECK(gray.size() == size_t(h) * w, "gray buffer size mismatch");
  write_png_impl(path, gray.data(), h, w, PNG_COLOR_TYPE_GRAY, 1);
}

}  // namespace tfg
