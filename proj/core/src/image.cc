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
#include "prodstage/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "prodstage/error.h"

namespace prodstage {

namespace {

uint8_t ClampToByte(double v) {
  // Round half up, then clamp.
  const double r = std::floor(v + 0.5);
  return static_cast<uint8_t>(std::clamp(r, 0.0, 255.0));
}

int RoundHalfUp(double v) { return static_cast<int>(std::floor(v + 0.5)); }

void RequireSameSize(int w0, int h0, int w1, int h1, const char* what) {
  if (w0 != w1 || h0 != h1) {
    Fail(ErrorCode::kInvalidInput,
         std::string(what) + ": dimension mismatch (" + std::to_string(w0) +
             "x" + std::to_string(h0) + " vs " + std::to_string(w1) + "x" +
             std::to_string(h1) + ")");
  }
}

// Separable running max over a (2r+1) window, ignoring out-of-image samples.
BinaryMask WindowReduce(const BinaryMask& mask, int radius, bool take_max) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask rows(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(0, x - radius);
      const int hi = std::min(w - 1, x + radius);
      bool acc = !take_max;
      for (int i = lo; i <= hi; ++i) {
        acc = take_max ? (acc || mask.test(i, y)) : (acc && mask.test(i, y));
      }
      rows.assign(x, y, acc);
    }
  }
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    const int lo = std::max(0, y - radius);
    const int hi = std::min(h - 1, y + radius);
    for (int x = 0; x < w; ++x) {
      bool acc = !take_max;
      for (int j = lo; j <= hi; ++j) {
        acc = take_max ? (acc || rows.test(x, j)) : (acc && rows.test(x, j));
      }
      out.assign(x, y, acc);
    }
  }
  return out;
}

}  // namespace

Image::Image(int width, int height, Color fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    Fail(ErrorCode::kInvalidInput, "image dimensions must be positive");
  }
  data_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    data_[i * 3 + 0] = fill.r;
    data_[i * 3 + 1] = fill.g;
    data_[i * 3 + 2] = fill.b;
  }
}

Image::Image(int width, int height, std::vector<uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    Fail(ErrorCode::kInvalidInput, "image dimensions must be positive");
  }
  if (data_.size() != pixel_count() * 3) {
    Fail(ErrorCode::kInvalidInput, "image buffer length != width*height*3");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(values().begin(), values().end(),
                    [](uint8_t v) { return v != 0; }));
}

BinaryMask Invert(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 0 : 1;
  return out;
}

BinaryMask Union(const BinaryMask& a, const BinaryMask& b) {
  RequireSameSize(a.width(), a.height(), b.width(), b.height(), "Union");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] || b[i]) ? 1 : 0;
  return out;
}

Image Resize(const Image& img, int width, int height) {
  if (img.empty() || width < 1 || height < 1) {
    Fail(ErrorCode::kInvalidInput, "Resize: degenerate dimensions");
  }
  if (width == img.width() && height == img.height()) return img;
  Image out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy =
        std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx =
          std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - x0;
      const uint8_t* a = img.pixel(x0, y0);
      const uint8_t* b = img.pixel(x1, y0);
      const uint8_t* c = img.pixel(x0, y1);
      const uint8_t* d = img.pixel(x1, y1);
      uint8_t* o = out.pixel(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        const double top = a[ch] + (b[ch] - a[ch]) * tx;
        const double bottom = c[ch] + (d[ch] - c[ch]) * tx;
        o[ch] = ClampToByte(top + (bottom - top) * ty);
      }
    }
  }
  return out;
}

BinaryMask ResizeMask(const BinaryMask& mask, int width, int height) {
  if (width == mask.width() && height == mask.height()) return mask;
  BinaryMask out(width, height);
  const double sx = static_cast<double>(mask.width()) / width;
  const double sy = static_cast<double>(mask.height()) / height;
  for (int y = 0; y < height; ++y) {
    const int sy_i = std::clamp(
        static_cast<int>(std::floor((y + 0.5) * sy)), 0, mask.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx_i = std::clamp(
          static_cast<int>(std::floor((x + 0.5) * sx)), 0, mask.width() - 1);
      out(x, y) = mask(sx_i, sy_i);
    }
  }
  return out;
}

std::pair<Image, CanonicalFrame> Canonicalize(const Image& img, int frame_size,
                                              Color fill) {
  if (img.empty()) {
    Fail(ErrorCode::kInvalidInput, "Canonicalize: zero-size image");
  }
  if (frame_size < 16) {
    Fail(ErrorCode::kInvalidInput, "Canonicalize: frame size must be >= 16");
  }
  CanonicalFrame frame;
  frame.size = frame_size;
  frame.fill = fill;
  frame.original_width = img.width();
  frame.original_height = img.height();
  frame.scale = std::min(static_cast<double>(frame_size) / img.width(),
                         static_cast<double>(frame_size) / img.height());
  frame.content_width = std::clamp(RoundHalfUp(img.width() * frame.scale), 1,
                                   frame_size);
  frame.content_height = std::clamp(RoundHalfUp(img.height() * frame.scale),
                                    1, frame_size);
  frame.offset_x = (frame_size - frame.content_width) / 2;
  frame.offset_y = (frame_size - frame.content_height) / 2;

  const Image content =
      Resize(img, frame.content_width, frame.content_height);
  Image out(frame_size, frame_size, fill);
  for (int y = 0; y < content.height(); ++y) {
    for (int x = 0; x < content.width(); ++x) {
      out.set(x + frame.offset_x, y + frame.offset_y, content.at(x, y));
    }
  }
  out.set_id(img.id());
  return {std::move(out), frame};
}

Image Uncanonicalize(const Image& canonical, const CanonicalFrame& frame) {
  if (canonical.width() != frame.size || canonical.height() != frame.size) {
    Fail(ErrorCode::kInvalidInput, "Uncanonicalize: frame size mismatch");
  }
  Image content(frame.content_width, frame.content_height);
  for (int y = 0; y < frame.content_height; ++y) {
    for (int x = 0; x < frame.content_width; ++x) {
      content.set(x, y, canonical.at(x + frame.offset_x, y + frame.offset_y));
    }
  }
  Image out = Resize(content, frame.original_width, frame.original_height);
  out.set_id(canonical.id());
  return out;
}

Image Uniform(int width, int height, Color fill) {
  return Image(width, height, fill);
}

Image Composite(const Image& base, const Image& overlay,
                const BinaryMask& mask) {
  RequireSameSize(base.width(), base.height(), overlay.width(),
                  overlay.height(), "Composite");
  RequireSameSize(base.width(), base.height(), mask.width(), mask.height(),
                  "Composite");
  Image out = base;
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < base.width(); ++x) {
      if (mask.test(x, y)) out.set(x, y, overlay.at(x, y));
    }
  }
  return out;
}

Point2 MaskCentroid(const BinaryMask& mask) {
  double sx = 0.0;
  double sy = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.test(x, y)) {
        sx += x;
        sy += y;
        ++n;
      }
    }
  }
  if (n == 0) Fail(ErrorCode::kEmptyMask, "MaskCentroid: mask is empty");
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

BoundingBox MaskBounds(const BinaryMask& mask) {
  BoundingBox box{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.test(x, y)) continue;
      box.x0 = std::min(box.x0, x);
      box.y0 = std::min(box.y0, y);
      box.x1 = std::max(box.x1, x);
      box.y1 = std::max(box.y1, y);
    }
  }
  if (box.x1 < 0) Fail(ErrorCode::kEmptyMask, "MaskBounds: mask is empty");
  return box;
}

BinaryMask Dilate(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  return WindowReduce(mask, radius, /*take_max=*/true);
}

BinaryMask Erode(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  return WindowReduce(mask, radius, /*take_max=*/false);
}

Plane<float> ToGray(const Image& img) {
  Plane<float> out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const uint8_t* p = img.pixel(x, y);
      out(x, y) = (0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]) / 255.0f;
    }
  }
  return out;
}

}  // namespace prodstage
