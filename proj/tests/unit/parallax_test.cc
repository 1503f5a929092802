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


#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "oracles.h"
#include "prodstage/parallax.h"
#include "prodstage/png_io.h"

namespace prodstage {
namespace {

using testing::BruteCentroid;
using testing::ErrorCodeOf;
using testing::RandomImage;
using testing::StoredPlateInpainter;
using testing::TempDir;

struct Fixture {
  Image img;
  Image plate;
  BinaryMask mask;
};

Fixture MakeFixture(uint64_t seed) {
  Rng rng(seed);
  Fixture f{RandomImage(rng, 48, 40), RandomImage(rng, 48, 40), BinaryMask(48, 40, false)};
  for (int y = 12; y < 28; ++y) {
    for (int x = 18; x < 30; ++x) f.mask.assign(x, y, true);
  }
  return f;
}

TEST(Shifts, SinusoidSequence) {
  ParallaxConfig cfg;
  cfg.frames = 4;
  cfg.amplitude = 10;
  const int want[] = {0, 10, 0, -10};
  for (int t = 0; t < 4; ++t) EXPECT_EQ(ForegroundShift(cfg, t), want[t]);
  cfg.bg_ratio = 0.3;
  EXPECT_EQ(BackgroundShift(cfg, 10), 3);
  EXPECT_EQ(BackgroundShift(cfg, -10), -3);
  EXPECT_EQ(BackgroundShift(cfg, 0), 0);
}

TEST(Shifts, MatchRoundedFormula) {
  ParallaxConfig cfg;
  cfg.frames = 24;
  cfg.amplitude = 7.5;
  cfg.bg_ratio = 0.45;
  for (int t = 0; t < 24; ++t) {
    const int dx = static_cast<int>(std::lround(7.5 * std::sin(2 * 3.14159265358979323846 * t / 24)));
    EXPECT_EQ(ForegroundShift(cfg, t), dx);
    EXPECT_EQ(BackgroundShift(cfg, dx), static_cast<int>(std::lround(0.45 * dx)));
  }
}

TEST(Config, Validation) {
  const auto bad = [](auto mutate) {
    ParallaxConfig cfg;
    mutate(cfg);
    return ErrorCodeOf([&] { cfg.Validate(); });
  };
  EXPECT_FALSE(bad([](ParallaxConfig&) {}).has_value());
  EXPECT_EQ(bad([](ParallaxConfig& c) { c.frames = 0; }), ErrorCode::kConfiguration);
  EXPECT_EQ(bad([](ParallaxConfig& c) { c.bg_ratio = 1.0; }), ErrorCode::kConfiguration);
  EXPECT_EQ(bad([](ParallaxConfig& c) { c.bg_ratio = -0.1; }), ErrorCode::kConfiguration);
  EXPECT_EQ(bad([](ParallaxConfig& c) { c.amplitude = 20; }), ErrorCode::kConfiguration);
  EXPECT_EQ(ParseParallaxPath("sinusoidal-horizontal"), ParallaxPath::kSinusoidalHorizontal);
  EXPECT_EQ(ParallaxPathName(ParallaxPath::kSinusoidalHorizontal), "sinusoidal-horizontal");
  EXPECT_TRUE(ErrorCodeOf([] { ParseParallaxPath("zigzag"); }).has_value());
}

TEST(CleanPlate, OracleInpainterFillsDilatedHole) {
  const Fixture f = MakeFixture(61);
  const StoredPlateInpainter oracle(f.plate);
  const Image plate = MakeCleanPlate(f.img, f.mask, oracle);
  const BinaryMask grown = Dilate(f.mask, kCleanPlateDilation);
  EXPECT_EQ(plate, Composite(f.img, f.plate, grown));
  EXPECT_EQ(MakeCleanPlate(f.img, f.mask, oracle), plate);
}

TEST(CleanPlate, EmptyMask) {
  const Fixture f = MakeFixture(62);
  const StoredPlateInpainter oracle(f.plate);
  EXPECT_EQ(ErrorCodeOf([&] { MakeCleanPlate(f.img, BinaryMask(48, 40, false), oracle); }),
            ErrorCode::kEmptyMask);
}

TEST(RenderFrames, ZeroAmplitudeIsStatic) {
  const Fixture f = MakeFixture(63);
  ParallaxConfig cfg;
  cfg.frames = 5;
  cfg.amplitude = 0;
  const FrameSequence seq = RenderFrames(f.img, f.mask, f.plate, cfg);
  ASSERT_EQ(seq.frames.size(), 5u);
  for (const Image& frame : seq.frames) EXPECT_EQ(frame, Composite(f.plate, f.img, f.mask));
}

TEST(RenderFrames, ForegroundCentroidFollowsShift) {
  const Fixture f = MakeFixture(64);
  ParallaxConfig cfg;
  cfg.frames = 8;
  cfg.amplitude = 6;
  const FrameSequence seq = RenderFrames(f.img, f.mask, f.plate, cfg);
  ASSERT_EQ(seq.frames.size(), 8u);
  ASSERT_EQ(seq.foreground_dx.size(), 8u);
  const Point2 c0 = BruteCentroid(f.mask);
  for (int t = 0; t < 8; ++t) {
    const int dx = seq.foreground_dx[t];
    EXPECT_EQ(dx, ForegroundShift(cfg, t));
    EXPECT_EQ(seq.background_dx[t], BackgroundShift(cfg, dx));
    BinaryMask moved(48, 40, false);
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 48; ++x) {
        if (f.mask.test(x, y)) {
          moved.assign(x + dx, y, true);
          ASSERT_EQ(seq.frames[t].at(x + dx, y), f.img.at(x, y));
        }
      }
    }
    const Point2 c = BruteCentroid(moved);
    EXPECT_NEAR(c.x - c0.x, dx, 0.5);
    EXPECT_NEAR(c.y - c0.y, 0.0, 0.5);
  }
}

TEST(RenderFrames, BackgroundUsesEdgeReplicatedPlate) {
  const Fixture f = MakeFixture(65);
  ParallaxConfig cfg;
  cfg.frames = 4;
  cfg.amplitude = 10;
  cfg.bg_ratio = 0.3;
  const Image frame = RenderFrame(f.img, f.mask, f.plate, cfg, 1);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 48; ++x) {
      if (x - 10 >= 0 && f.mask.test(x - 10, y)) continue;
      const int sx = std::clamp(x - 3, 0, 47);
      ASSERT_EQ(frame.at(x, y), f.plate.at(sx, y)) << x << "," << y;
    }
  }
}

TEST(RenderFrames, PlateSizeMismatch) {
  const Fixture f = MakeFixture(66);
  EXPECT_EQ(ErrorCodeOf([&] { RenderFrames(f.img, f.mask, Uniform(10, 10, kBlack), {}); }),
            ErrorCode::kInvalidInput);
}

TEST(Encoder, WritesFramesAndManifest) {
  TempDir dir;
  const Fixture f = MakeFixture(67);
  ParallaxConfig cfg;
  cfg.frames = 3;
  cfg.amplitude = 4;
  const FrameSequence seq = RenderFrames(f.img, f.mask, f.plate, cfg);
  PngSequenceEncoder().Encode(seq, cfg, dir.path());
  for (int t = 0; t < 3; ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04d.png", t);
    EXPECT_EQ(ReadPng(dir.path() / name), seq.frames[t]);
  }
  std::ifstream in(dir.path() / "animation.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("frames").size(), 3u);
  EXPECT_EQ(j.at("frames")[1].at("dx"), seq.foreground_dx[1]);
  EXPECT_EQ(j.dump(), nlohmann::json::parse(AnimationManifest(seq, cfg)).dump());
}

}  // namespace
}  // namespace prodstage
