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

#include "prodstage/parallax.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "prodstage/error.h"
#include "prodstage/png_io.h"

namespace prodstage {

std::string_view ParallaxPathName(ParallaxPath path) {
  switch (path) {
    case ParallaxPath::kSinusoidalHorizontal:
      return "sinusoidal-horizontal";
  }
  return "unknown";
}

ParallaxPath ParseParallaxPath(std::string_view name) {
  if (name == "sinusoidal-horizontal") {
    return ParallaxPath::kSinusoidalHorizontal;
  }
  Fail(ErrorCode::kConfiguration,
       "unknown parallax path \"" + std::string(name) + "\"");
}

void ParallaxConfig::Validate() const {
  if (frames < 1) Fail(ErrorCode::kConfiguration, "parallax frames must be >= 1");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    Fail(ErrorCode::kConfiguration, "parallax amplitude must be >= 0");
  }
  if (!(bg_ratio >= 0.0 && bg_ratio < 1.0)) {
    Fail(ErrorCode::kConfiguration, "parallax bg_ratio must be in [0, 1)");
  }
  if (overscan < amplitude) {
    Fail(ErrorCode::kConfiguration,
         "parallax overscan must be at least the amplitude");
  }
}

int ForegroundShift(const ParallaxConfig& cfg, int t) {
  switch (cfg.path) {
    case ParallaxPath::kSinusoidalHorizontal: {
      const double phase = 2.0 * std::numbers::pi * t / cfg.frames;
      return static_cast<int>(std::lround(cfg.amplitude * std::sin(phase)));
    }
  }
  return 0;
}

int BackgroundShift(const ParallaxConfig& cfg, int dx) {
  return static_cast<int>(std::lround(cfg.bg_ratio * dx));
}

Image MakeCleanPlate(const Image& img, const BinaryMask& mask,
                     const Inpainter& inpainter, int dilation) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    Fail(ErrorCode::kInvalidInput, "MakeCleanPlate: mask/image size mismatch");
  }
  if (mask.none()) Fail(ErrorCode::kEmptyMask, "MakeCleanPlate: empty mask");
  if (dilation < 0) Fail(ErrorCode::kInvalidInput, "dilation must be >= 0");
  return Inpaint(inpainter, img, Dilate(mask, dilation));
}

Image RenderFrame(const Image& img, const BinaryMask& mask, const Image& plate,
                  const ParallaxConfig& cfg, int t) {
  cfg.Validate();
  const int w = img.width();
  const int h = img.height();
  if (plate.width() != w || plate.height() != h || mask.width() != w ||
      mask.height() != h) {
    Fail(ErrorCode::kInvalidInput, "RenderFrame: img, mask and plate differ");
  }
  const int dx = ForegroundShift(cfg, t);
  const int bg = BackgroundShift(cfg, dx);
  if (std::abs(dx) > cfg.overscan || std::abs(bg) > cfg.overscan) {
    Fail(ErrorCode::kConfiguration, "parallax shift exceeds overscan headroom");
  }
  // Reading from the plate clamped to its border is the same as cropping a
  // copy enlarged by edge replication.
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int fx = x - dx;
      if (fx >= 0 && fx < w && mask.test(fx, y)) {
        out.set(x, y, img.at(fx, y));
      } else {
        out.set(x, y, plate.at(std::clamp(x - bg, 0, w - 1), y));
      }
    }
  }
  return out;
}

FrameSequence RenderFrames(const Image& img, const BinaryMask& mask,
                           const Image& plate, const ParallaxConfig& cfg) {
  cfg.Validate();
  FrameSequence seq;
  for (int t = 0; t < cfg.frames; ++t) {
    const int dx = ForegroundShift(cfg, t);
    seq.frames.push_back(RenderFrame(img, mask, plate, cfg, t));
    seq.foreground_dx.push_back(dx);
    seq.background_dx.push_back(BackgroundShift(cfg, dx));
  }
  return seq;
}

std::string AnimationManifest(const FrameSequence& seq,
                              const ParallaxConfig& cfg) {
  nlohmann::ordered_json j;
  j["T"] = cfg.frames;
  j["A"] = cfg.amplitude;
  j["rho"] = cfg.bg_ratio;
  j["path"] = ParallaxPathName(cfg.path);
  j["overscan"] = cfg.overscan;
  nlohmann::ordered_json frames = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.png", t);
    frames.push_back({{"file", name},
                      {"dx", seq.foreground_dx[t]},
                      {"bg_dx", seq.background_dx[t]}});
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

void PngSequenceEncoder::Encode(const FrameSequence& seq,
                                const ParallaxConfig& cfg,
                                const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.png", t);
    WritePng(dir / name, seq.frames[t]);
  }
  std::ofstream manifest(dir / "animation.json", std::ios::binary);
  manifest << AnimationManifest(seq, cfg);
  if (!manifest) Fail(ErrorCode::kIo, "cannot write animation manifest");
}

}  // namespace prodstage
