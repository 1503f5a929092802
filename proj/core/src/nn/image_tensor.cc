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
#include "prodstage/nn/image_tensor.h"

#include <algorithm>
#include <cmath>

#include "prodstage/error.h"

namespace prodstage::nn {

namespace {

void CheckPlane(const Tensor& t, int w, int h, int channels) {
  if (t.w() != w || t.h() != h || t.c() < channels) {
    Fail(ErrorCode::kInvalidInput, "tensor/raster shape mismatch");
  }
}

}  // namespace

void StoreImage(const Image& img, Tensor& out, int index) {
  CheckPlane(out, img.width(), img.height(), 3);
  for (int c = 0; c < 3; ++c) {
    float* dst = out.channel(index, c);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      dst[i] = img.data()[i * 3 + c] / 255.0f;
    }
  }
}

void StoreMask(const BinaryMask& mask, Tensor& out, int index) {
  CheckPlane(out, mask.width(), mask.height(), 1);
  float* dst = out.channel(index, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) dst[i] = mask[i] ? 1.0f : 0.0f;
}

void StorePlane(const Plane<double>& plane, Tensor& out, int index) {
  CheckPlane(out, plane.width(), plane.height(), 1);
  float* dst = out.channel(index, 0);
  for (std::size_t i = 0; i < plane.size(); ++i) {
    dst[i] = static_cast<float>(plane[i]);
  }
}

void StorePlane(const Plane<float>& plane, Tensor& out, int index) {
  CheckPlane(out, plane.width(), plane.height(), 1);
  std::copy(plane.values().begin(), plane.values().end(), out.channel(index, 0));
}

Tensor ImagesToTensor(std::span<const Image> images) {
  if (images.empty()) return {};
  Tensor t(static_cast<int>(images.size()), 3, images[0].height(),
           images[0].width());
  for (std::size_t i = 0; i < images.size(); ++i) {
    StoreImage(images[i], t, static_cast<int>(i));
  }
  return t;
}

Image TensorToImage(const Tensor& t, int index) {
  if (t.c() < 3) Fail(ErrorCode::kInvalidInput, "TensorToImage: need 3 channels");
  Image img(t.w(), t.h());
  for (int c = 0; c < 3; ++c) {
    const float* src = t.channel(index, c);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      const float v = std::isfinite(src[i]) ? std::clamp(src[i], 0.0f, 1.0f) : 0.0f;
      img.data()[i * 3 + c] =
          static_cast<uint8_t>(std::floor(v * 255.0f + 0.5f));
    }
  }
  return img;
}

Plane<double> TensorToPlane(const Tensor& t, int index, int channel) {
  Plane<double> out(t.w(), t.h());
  const float* src = t.channel(index, channel);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i];
  return out;
}

}  // namespace prodstage::nn
