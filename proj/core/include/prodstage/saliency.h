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
#ifndef PRODSTAGE_SALIENCY_H_
#define PRODSTAGE_SALIENCY_H_

#include <filesystem>
#include <memory>
#include <string>

#include "prodstage/image.h"

namespace prodstage {

inline constexpr double kDefaultSaliencyThreshold = 0.5;

struct SaliencyConfig {
  // Strictly inside (0, 1).
  double threshold = kDefaultSaliencyThreshold;
};

// Deterministic per-pixel foreground probability.
class SaliencyBackend {
 public:
  virtual ~SaliencyBackend() = default;
  virtual std::string name() const = 0;
  virtual SaliencyMap Detect(const Image& img) const = 0;
};

// Color distance to the median border color, scaled by 255*sqrt(3) and then
// max-normalized. Exact on products over a solid backdrop.
class BorderContrastBackend final : public SaliencyBackend {
 public:
  std::string name() const override { return "border-contrast"; }
  SaliencyMap Detect(const Image& img) const override;

  // Per-channel median over the one-pixel border ring.
  static Color BorderMedian(const Image& img);
};

// Pretrained U^2-Net exported to ONNX, run through OpenCV DNN. Throws
// kBackendUnavailable when the model cannot be loaded or the library was
// built without OpenCV DNN.
class U2NetBackend final : public SaliencyBackend {
 public:
  explicit U2NetBackend(const std::filesystem::path& model_path,
                        int input_size = 320);
  ~U2NetBackend() override;

  std::string name() const override { return "u2net"; }
  SaliencyMap Detect(const Image& img) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SaliencyBackendOptions {
  std::string name = "border-contrast";
  std::filesystem::path model_path;  // config key saliency.model_path
};

std::unique_ptr<SaliencyBackend> MakeSaliencyBackend(
    const SaliencyBackendOptions& options);

SaliencyMap DetectSaliency(const Image& img, const SaliencyBackend& backend);

// mask = map > threshold (strict).
BinaryMask Binarize(const SaliencyMap& map, const SaliencyConfig& cfg = {});

// img on the mask, `fill` elsewhere.
Image SegmentProduct(const Image& img, const BinaryMask& mask,
                     Color fill = kWhite);

}  // namespace prodstage

#endif  // PRODSTAGE_SALIENCY_H_
