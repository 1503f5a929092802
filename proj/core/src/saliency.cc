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
#include "prodstage/saliency.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "prodstage/error.h"

namespace prodstage {

Color BorderContrastBackend::BorderMedian(const Image& img) {
  std::vector<uint8_t> ch[3];
  auto push = [&](int x, int y) {
    const uint8_t* p = img.pixel(x, y);
    for (int c = 0; c < 3; ++c) ch[c].push_back(p[c]);
  };
  const int w = img.width();
  const int h = img.height();
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    if (h > 1) push(x, h - 1);
  }
  for (int y = 1; y + 1 < h; ++y) {
    push(0, y);
    if (w > 1) push(w - 1, y);
  }
  uint8_t med[3];
  for (int c = 0; c < 3; ++c) {
    // Lower median for even counts.
    auto mid = ch[c].begin() + (ch[c].size() - 1) / 2;
    std::nth_element(ch[c].begin(), mid, ch[c].end());
    med[c] = *mid;
  }
  return {med[0], med[1], med[2]};
}

SaliencyMap BorderContrastBackend::Detect(const Image& img) const {
  const Color bg = BorderMedian(img);
  const double denom = 255.0 * std::sqrt(3.0);
  SaliencyMap map(img.width(), img.height());
  float max_score = 0.0f;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const uint8_t* p = img.pixel(x, y);
      const double dr = static_cast<double>(p[0]) - bg.r;
      const double dg = static_cast<double>(p[1]) - bg.g;
      const double db = static_cast<double>(p[2]) - bg.b;
      const float s =
          static_cast<float>(std::sqrt(dr * dr + dg * dg + db * db) / denom);
      map(x, y) = s;
      max_score = std::max(max_score, s);
    }
  }
  if (max_score > 0.0f) {
    for (float& v : map.values()) v = std::min(1.0f, v / max_score);
  }
  return map;
}

std::unique_ptr<SaliencyBackend> MakeSaliencyBackend(
    const SaliencyBackendOptions& options) {
  if (options.name == "border-contrast") {
    return std::make_unique<BorderContrastBackend>();
  }
  if (options.name == "u2net") {
    return std::make_unique<U2NetBackend>(options.model_path);
  }
  Fail(ErrorCode::kConfiguration,
       "unknown saliency backend \"" + options.name + "\"");
}

SaliencyMap DetectSaliency(const Image& img, const SaliencyBackend& backend) {
  if (img.empty()) Fail(ErrorCode::kInvalidInput, "DetectSaliency: empty image");
  return backend.Detect(img);
}

BinaryMask Binarize(const SaliencyMap& map, const SaliencyConfig& cfg) {
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    Fail(ErrorCode::kInvalidInput, "saliency threshold must be in (0, 1)");
  }
  BinaryMask mask(map.width(), map.height());
  for (std::size_t i = 0; i < map.size(); ++i) {
    mask[i] = static_cast<double>(map[i]) > cfg.threshold ? 1 : 0;
  }
  return mask;
}

Image SegmentProduct(const Image& img, const BinaryMask& mask, Color fill) {
  if (img.width() != mask.width() || img.height() != mask.height()) {
    Fail(ErrorCode::kInvalidInput, "SegmentProduct: dimension mismatch");
  }
  Image out = Composite(Uniform(img.width(), img.height(), fill), img, mask);
  out.set_id(img.id());
  return out;
}

}  // namespace prodstage
