// Copyright 2026 The Prodstage Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "prodstage/png_io.h"

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "prodstage/error.h"

namespace prodstage {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr Open(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    Fail(ErrorCode::kIo, "cannot open " + path.string());
  }
  return f;
}

[[noreturn]] void PngError(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what != nullptr) *what = msg;
  png_longjmp(png, 1);
}

void PngWarning(png_structp, png_const_charp) {}

// Returns rows of 8-bit samples with `channels` per pixel (1 or 3).
std::vector<uint8_t> Decode(const std::filesystem::path& path, int channels,
                            int* width, int* height) {
  FilePtr file = Open(path, "rb");
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error,
                                           PngError, PngWarning);
  if (png == nullptr) Fail(ErrorCode::kIo, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<uint8_t> pixels;
  std::vector<uint8_t> raw;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorCode::kIo, "failed to decode " + path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  const bool is_gray = (color_type & PNG_COLOR_MASK_COLOR) == 0;
  if (channels == 3 && is_gray) png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  *width = static_cast<int>(png_get_image_width(png, info));
  *height = static_cast<int>(png_get_image_height(png, info));
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  const int decoded_channels = png_get_channels(png, info);
  raw.resize(rowbytes * static_cast<std::size_t>(*height));
  rows.resize(*height);
  for (int y = 0; y < *height; ++y) rows[y] = raw.data() + rowbytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  pixels.resize(static_cast<std::size_t>(*width) * *height * channels);
  for (int y = 0; y < *height; ++y) {
    for (int x = 0; x < *width; ++x) {
      const uint8_t* src = rows[y] + static_cast<std::size_t>(x) * decoded_channels;
      uint8_t* dst =
          pixels.data() + (static_cast<std::size_t>(y) * *width + x) * channels;
      for (int c = 0; c < channels; ++c) {
        dst[c] = src[std::min(c, decoded_channels - 1)];
      }
    }
  }
  return pixels;
}

void Encode(const std::filesystem::path& path, const uint8_t* data, int width,
            int height, int channels) {
  FilePtr file = Open(path, "wb");
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error,
                                            PngError, PngWarning);
  if (png == nullptr) Fail(ErrorCode::kIo, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    Fail(ErrorCode::kIo, "failed to encode " + path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(data + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) {
    Fail(ErrorCode::kIo, "failed to flush " + path.string());
  }
}

}  // namespace

Image ReadPng(const std::filesystem::path& path) {
  int w = 0;
  int h = 0;
  std::vector<uint8_t> pixels = Decode(path, 3, &w, &h);
  Image img(w, h, std::move(pixels));
  return img;
}

void WritePng(const std::filesystem::path& path, const Image& img) {
  Encode(path, img.data().data(), img.width(), img.height(), 3);
}

BinaryMask ReadMaskPng(const std::filesystem::path& path) {
  int w = 0;
  int h = 0;
  const std::vector<uint8_t> pixels = Decode(path, 1, &w, &h);
  BinaryMask mask(w, h);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    mask[i] = pixels[i] >= 128 ? 1 : 0;
  }
  return mask;
}

void WriteMaskPng(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? 255 : 0;
  Encode(path, bytes.data(), mask.width(), mask.height(), 1);
}

}  // namespace prodstage
