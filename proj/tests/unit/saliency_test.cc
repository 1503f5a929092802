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

#include "oracles.h"
#include "prodstage/saliency.h"

namespace prodstage {
namespace {

using testing::ErrorCodeOf;
using testing::RandomBlobMask;
using testing::RandomImage;
using testing::RandomNoiseMask;

TEST(BorderContrast, UniformImageGivesZeroMap) {
  const BorderContrastBackend backend;
  const SaliencyMap map = DetectSaliency(Uniform(20, 15, kWhite), backend);
  for (float v : map.values()) EXPECT_EQ(v, 0.0f);
}

TEST(BorderContrast, RedBlockOnWhite) {
  Image img = Uniform(16, 16, kWhite);
  for (int y = 6; y < 10; ++y) {
    for (int x = 5; x < 9; ++x) img.set(x, y, {255, 0, 0});
  }
  const SaliencyMap map = DetectSaliency(img, BorderContrastBackend());
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const bool block = x >= 5 && x < 9 && y >= 6 && y < 10;
      EXPECT_EQ(map(x, y), block ? 1.0f : 0.0f) << x << "," << y;
    }
  }
}

TEST(BorderContrast, MatchesColorDistanceOracle) {
  Rng rng(11);
  const BorderContrastBackend backend;
  for (int i = 0; i < 30; ++i) {
    const int w = rng.UniformInt(3, 24);
    const int h = rng.UniformInt(3, 24);
    const Image img = RandomImage(rng, w, h);
    const Color bg = BorderContrastBackend::BorderMedian(img);
    std::vector<double> dist(static_cast<std::size_t>(w) * h);
    double max_d = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Color c = img.at(x, y);
        const double d = std::sqrt(std::pow(c.r - bg.r, 2.0) + std::pow(c.g - bg.g, 2.0) +
                                   std::pow(c.b - bg.b, 2.0));
        dist[y * w + x] = d;
        max_d = std::max(max_d, d);
      }
    }
    const SaliencyMap map = DetectSaliency(img, backend);
    for (std::size_t p = 0; p < dist.size(); ++p) {
      EXPECT_NEAR(map[p], max_d > 0 ? dist[p] / max_d : 0.0, 1e-5);
    }
  }
}

TEST(BorderContrast, BorderMedianOfMostlySolidBorder) {
  Image img = Uniform(10, 10, {10, 20, 30});
  img.set(0, 0, {200, 200, 200});
  img.set(9, 9, {0, 0, 0});
  EXPECT_EQ(BorderContrastBackend::BorderMedian(img), (Color{10, 20, 30}));
}

TEST(BorderContrast, SolidBorderColorScoresZeroEverywhere) {
  Rng rng(12);
  const BorderContrastBackend backend;
  for (int i = 0; i < 40; ++i) {
    const int w = rng.UniformInt(4, 30);
    const int h = rng.UniformInt(4, 30);
    const Color bg{static_cast<uint8_t>(rng.UniformInt(0, 255)),
                   static_cast<uint8_t>(rng.UniformInt(0, 255)),
                   static_cast<uint8_t>(rng.UniformInt(0, 255))};
    Image img = RandomImage(rng, w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1 || rng.Bernoulli(0.2)) {
          img.set(x, y, bg);
        }
      }
    }
    const SaliencyMap map = DetectSaliency(img, backend);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (img.at(x, y) == bg) { ASSERT_EQ(map(x, y), 0.0f); }
      }
    }
  }
}

TEST(BorderContrast, Deterministic) {
  Rng rng(13);
  const Image img = RandomImage(rng, 31, 17);
  const BorderContrastBackend backend;
  EXPECT_EQ(DetectSaliency(img, backend), DetectSaliency(img, backend));
}

TEST(Binarize, AllZeroMap) { EXPECT_TRUE(Binarize(SaliencyMap(5, 5, 0.0f)).none()); }

TEST(Binarize, ThresholdIsStrict) {
  EXPECT_TRUE(Binarize(SaliencyMap(1, 1, 0.5f)).none());
}

TEST(Binarize, TwoByTwoExample) {
  SaliencyMap map(2, 2);
  map(0, 0) = 0.2f;
  map(1, 0) = 0.9f;
  map(0, 1) = 0.5f;
  map(1, 1) = 0.51f;
  const BinaryMask m = Binarize(map);
  EXPECT_FALSE(m.test(0, 0));
  EXPECT_TRUE(m.test(1, 0));
  EXPECT_FALSE(m.test(0, 1));
  EXPECT_TRUE(m.test(1, 1));
}

TEST(Binarize, ThresholdOutsideOpenIntervalIsRejected) {
  for (double t : {0.0, 1.0, -1.0, 2.0, std::nan("")}) {
    EXPECT_EQ(ErrorCodeOf([&] { Binarize(SaliencyMap(1, 1), {t}); }),
              ErrorCode::kInvalidInput)
        << t;
  }
}

TEST(Binarize, MonotoneInThreshold) {
  Rng rng(14);
  SaliencyMap map(40, 40);
  for (float& v : map.values()) v = static_cast<float>(rng.Uniform());
  std::size_t prev = map.size() + 1;
  for (int i = 1; i < 100; ++i) {
    const std::size_t n = Binarize(map, {i / 100.0}).count();
    EXPECT_LE(n, prev);
    prev = n;
  }
}

TEST(SegmentProduct, FullAndEmptyMasks) {
  Rng rng(15);
  const Image img = RandomImage(rng, 8, 6);
  EXPECT_EQ(SegmentProduct(img, BinaryMask(8, 6, true)), img);
  EXPECT_EQ(SegmentProduct(img, BinaryMask(8, 6, false), {1, 2, 3}), Uniform(8, 6, {1, 2, 3}));
}

TEST(SegmentProduct, EqualsCompositeOverUniformFill) {
  Rng rng(16);
  for (int i = 0; i < 50; ++i) {
    const int w = rng.UniformInt(1, 30);
    const int h = rng.UniformInt(1, 30);
    const Image img = RandomImage(rng, w, h);
    BinaryMask checker(w, h, false);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) checker.assign(x, y, (x + y) % 2 == 0);
    }
    const BinaryMask m = i % 2 == 0 ? checker : RandomNoiseMask(rng, w, h, 0.5);
    EXPECT_EQ(SegmentProduct(img, m, kWhite), Composite(Uniform(w, h, kWhite), img, m));
  }
}

TEST(SegmentProduct, DimensionMismatch) {
  EXPECT_EQ(ErrorCodeOf([] { SegmentProduct(Uniform(4, 4, kWhite), BinaryMask(3, 4, true)); }),
            ErrorCode::kInvalidInput);
}

TEST(Backends, UnknownNameIsConfigurationError) {
  EXPECT_EQ(ErrorCodeOf([] { MakeSaliencyBackend({"nope", {}}); }), ErrorCode::kConfiguration);
}

TEST(Backends, MissingModelIsBackendUnavailable) {
  EXPECT_EQ(ErrorCodeOf([] { MakeSaliencyBackend({"u2net", "/nonexistent/u2net.onnx"}); }),
            ErrorCode::kBackendUnavailable);
}

}  // namespace
}  // namespace prodstage
