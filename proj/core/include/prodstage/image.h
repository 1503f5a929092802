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
#ifndef PRODSTAGE_IMAGE_H_
#define PRODSTAGE_IMAGE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace prodstage {

struct Color {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  friend bool operator==(const Color&, const Color&) = default;
};

inline constexpr Color kWhite{255, 255, 255};
inline constexpr Color kBlack{0, 0, 0};

// 8-bit RGB raster, row-major, interleaved.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  Image(int width, int height, Color fill = kBlack);
  Image(int width, int height, std::vector<uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  uint8_t* pixel(int x, int y) {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  }
  const uint8_t* pixel(int x, int y) const {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  }
  Color at(int x, int y) const {
    const uint8_t* p = pixel(x, y);
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Color c) {
    uint8_t* p = pixel(x, y);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  std::span<uint8_t> data() { return data_; }
  std::span<const uint8_t> data() const { return data_; }

  const std::optional<std::string>& id() const { return id_; }
  void set_id(std::optional<std::string> id) { id_ = std::move(id); }

  // Pixel equality; the id is metadata and does not participate.
  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> data_;
  std::optional<std::string> id_;
};

// Single-channel raster used for masks and real-valued maps.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        values_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& operator()(int x, int y) {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

// Saliency probabilities in [0,1].
using SaliencyMap = Plane<float>;
// Edge strengths in [0,1]; ground-truth maps are exactly {0,1}.
using EdgeMap = Plane<double>;
// Per-pixel loss weights.
using WeightedMap = Plane<double>;

// true = foreground (product) or hole, depending on context.
class BinaryMask : public Plane<uint8_t> {
 public:
  using Plane<uint8_t>::Plane;
  BinaryMask(int width, int height, bool fill)
      : Plane<uint8_t>(width, height, fill ? 1 : 0) {}

  bool test(int x, int y) const { return (*this)(x, y) != 0; }
  void assign(int x, int y, bool v) { (*this)(x, y) = v ? 1 : 0; }
  std::size_t count() const;
  bool none() const { return count() == 0; }
};

BinaryMask Invert(const BinaryMask& mask);
BinaryMask Union(const BinaryMask& a, const BinaryMask& b);

// Maps between an original raster and the square canonical raster.
struct CanonicalFrame {
  int size = 256;
  double scale = 1.0;
  int offset_x = 0;
  int offset_y = 0;
  int content_width = 0;
  int content_height = 0;
  int original_width = 0;
  int original_height = 0;
  Color fill = kWhite;
};

inline constexpr int kDefaultFrameSize = 256;

// Letterboxes `img` into a frame_size x frame_size square, preserving aspect
// ratio. Content dimensions round half up; padding is split with the extra
// pixel going to the bottom/right.
std::pair<Image, CanonicalFrame> Canonicalize(const Image& img,
                                              int frame_size = kDefaultFrameSize,
                                              Color fill = kWhite);

// Crops the content region and resamples it back to the original size.
Image Uncanonicalize(const Image& canonical, const CanonicalFrame& frame);

// Bilinear resize with pixel-center alignment and edge clamping. Identity
// when the size is unchanged.
Image Resize(const Image& img, int width, int height);
BinaryMask ResizeMask(const BinaryMask& mask, int width, int height);

Image Uniform(int width, int height, Color fill);

// overlay where mask is set, base elsewhere.
Image Composite(const Image& base, const Image& overlay,
                const BinaryMask& mask);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Mean of the true-pixel centers; pixel (x, y) has center (x, y).
Point2 MaskCentroid(const BinaryMask& mask);

struct BoundingBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;  // inclusive
  int y1 = -1;
  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
};

// Throws kEmptyMask on an empty mask.
BoundingBox MaskBounds(const BinaryMask& mask);

// Square-structuring-element morphology of radius r ((2r+1)^2 window).
// Pixels outside the image are ignored, so the image border never acts as
// background for erosion nor as foreground for dilation.
BinaryMask Dilate(const BinaryMask& mask, int radius);
BinaryMask Erode(const BinaryMask& mask, int radius);

// Luma in [0,1] (Rec. 601 weights).
Plane<float> ToGray(const Image& img);

}  // namespace prodstage

#endif  // PRODSTAGE_IMAGE_H_
