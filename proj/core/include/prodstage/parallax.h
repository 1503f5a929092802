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

#ifndef PRODSTAGE_PARALLAX_H_
#define PRODSTAGE_PARALLAX_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "prodstage/image.h"
#include "prodstage/inpainter.h"

namespace prodstage {

enum class ParallaxPath {
  kSinusoidalHorizontal,  // dx(t) = round(A sin(2 pi t / T)), dy = 0
};

std::string_view ParallaxPathName(ParallaxPath path);
// Throws kConfiguration for unknown names.
ParallaxPath ParseParallaxPath(std::string_view name);

struct ParallaxConfig {
  int frames = 24;
  double amplitude = 10.0;  // pixels
  double bg_ratio = 0.3;    // in [0, 1)
  ParallaxPath path = ParallaxPath::kSinusoidalHorizontal;
  int overscan = 16;  // edge-replicated background margin, >= amplitude

  // Throws kConfiguration when out of range.
  void Validate() const;
};

struct FrameSequence {
  std::vector<Image> frames;
  std::vector<int> foreground_dx;
  std::vector<int> background_dx;
};

// Foreground horizontal displacement of frame t.
int ForegroundShift(const ParallaxConfig& cfg, int t);
// round(bg_ratio * dx).
int BackgroundShift(const ParallaxConfig& cfg, int dx);

inline constexpr int kCleanPlateDilation = 3;

// Inpaints the product region grown by `dilation` pixels.
Image MakeCleanPlate(const Image& img, const BinaryMask& mask,
                     const Inpainter& inpainter,
                     int dilation = kCleanPlateDilation);

Image RenderFrame(const Image& img, const BinaryMask& mask, const Image& plate,
                  const ParallaxConfig& cfg, int t);
FrameSequence RenderFrames(const Image& img, const BinaryMask& mask,
                           const Image& plate, const ParallaxConfig& cfg);

// Output sink for rendered animations.
class FrameEncoder {
 public:
  virtual ~FrameEncoder() = default;
  virtual void Encode(const FrameSequence& seq, const ParallaxConfig& cfg,
                      const std::filesystem::path& dir) const = 0;
};

// frame_0000.png ... plus animation.json.
class PngSequenceEncoder final : public FrameEncoder {
 public:
  void Encode(const FrameSequence& seq, const ParallaxConfig& cfg,
              const std::filesystem::path& dir) const override;
};

std::string AnimationManifest(const FrameSequence& seq,
                              const ParallaxConfig& cfg);

}  // namespace prodstage

#endif  // PRODSTAGE_PARALLAX_H_
