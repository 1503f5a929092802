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

#include "prodstage/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "prodstage/error.h"
#include "prodstage/png_io.h"

namespace prodstage {

namespace {

// Channel values sit in the middle of the toy-histogram bins so that
// jitter never crosses a bin edge.
constexpr Color kPalette[kSyntheticPaletteSize] = {
    {224, 32, 32},  {32, 224, 32},  {32, 32, 224},  {224, 224, 32},
    {224, 32, 224}, {32, 224, 224}, {224, 160, 32}, {96, 32, 224},
};

constexpr const char* kCategories[kSyntheticPaletteSize][2] = {
    {"Furniture", "Chairs"}, {"Furniture", "Tables"}, {"Furniture", "Sofas"},
    {"Decor", "Lamps"},      {"Decor", "Vases"},      {"Furniture", "Beds"},
    {"Decor", "Clocks"},     {"Furniture", "Shelves"},
};

constexpr Color kWall{186, 176, 160};
constexpr Color kFloor{150, 140, 125};

uint8_t Jitter(uint8_t v, int amount, Rng& rng) {
  return static_cast<uint8_t>(
      std::clamp(static_cast<int>(v) + rng.UniformInt(-amount, amount), 0, 255));
}

bool InsideShape(int kind, double u, double v) {
  // u, v in [-1, 1] relative to the shape box.
  switch (kind) {
    case 0:
      return std::abs(u) <= 1.0 && std::abs(v) <= 1.0;
    case 1:
      return u * u + v * v <= 1.0;
    case 2:
      return v >= -1.0 && v <= 1.0 && std::abs(u) <= (v + 1.0) / 2.0;
    default:
      return (v >= -1.0 && v <= -0.4 && std::abs(u) <= 1.0) ||
             (v > -0.4 && v <= 1.0 && std::abs(u) <= 0.3);
  }
}

}  // namespace

Image MakeShapeScene(int size, uint64_t seed) {
  if (size < 8) Fail(ErrorCode::kInvalidInput, "MakeShapeScene: size < 8");
  Rng rng(seed);
  const Color top{static_cast<uint8_t>(rng.UniformInt(60, 200)),
                  static_cast<uint8_t>(rng.UniformInt(60, 200)),
                  static_cast<uint8_t>(rng.UniformInt(60, 200))};
  const Color bottom{static_cast<uint8_t>(rng.UniformInt(40, 220)),
                     static_cast<uint8_t>(rng.UniformInt(40, 220)),
                     static_cast<uint8_t>(rng.UniformInt(40, 220))};
  Image img(size, size);
  for (int y = 0; y < size; ++y) {
    const double a = static_cast<double>(y) / (size - 1);
    const Color c{
        static_cast<uint8_t>(std::lround(top.r + a * (bottom.r - top.r))),
        static_cast<uint8_t>(std::lround(top.g + a * (bottom.g - top.g))),
        static_cast<uint8_t>(std::lround(top.b + a * (bottom.b - top.b)))};
    for (int x = 0; x < size; ++x) img.set(x, y, c);
  }
  const int shapes = rng.UniformInt(2, 4);
  for (int s = 0; s < shapes; ++s) {
    const Color c{static_cast<uint8_t>(rng.UniformInt(0, 255)),
                  static_cast<uint8_t>(rng.UniformInt(0, 255)),
                  static_cast<uint8_t>(rng.UniformInt(0, 255))};
    const bool disc = rng.Bernoulli(0.5);
    const double cx = rng.Uniform(0.15, 0.85) * size;
    const double cy = rng.Uniform(0.15, 0.85) * size;
    const double rx = rng.Uniform(0.08, 0.25) * size;
    const double ry = disc ? rx : rng.Uniform(0.08, 0.25) * size;
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double u = (x - cx) / rx;
        const double v = (y - cy) / ry;
        if (InsideShape(disc ? 1 : 0, u, v)) img.set(x, y, c);
      }
    }
  }
  return img;
}

std::vector<Image> MakeShapeScenes(int count, int size, uint64_t seed) {
  std::vector<Image> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(MakeShapeScene(size, DeriveSeed(seed, i)));
  }
  return out;
}

SyntheticProduct MakeSyntheticProduct(int size, int subcategory, bool staged,
                                      uint64_t seed) {
  if (subcategory < 0 || subcategory >= kSyntheticPaletteSize) {
    Fail(ErrorCode::kInvalidInput, "subcategory out of range");
  }
  if (size < 16) Fail(ErrorCode::kInvalidInput, "MakeSyntheticProduct: size < 16");
  Rng rng(seed);
  SyntheticProduct out{Image(size, size, kWhite), BinaryMask(size, size, false)};
  if (staged) {
    const int horizon = static_cast<int>(std::lround(0.7 * size));
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const Color base = y < horizon ? kWall : kFloor;
        out.image.set(x, y, {Jitter(base.r, 6, rng), Jitter(base.g, 6, rng),
                             Jitter(base.b, 6, rng)});
      }
    }
  }
  const int kind = subcategory % 4;
  const double cx = size * (0.5 + rng.Uniform(-0.08, 0.08));
  const double cy = size * (0.5 + rng.Uniform(-0.08, 0.08));
  const double rx = size * rng.Uniform(0.22, 0.32);
  const double ry = size * rng.Uniform(0.22, 0.32);
  const Color color = kPalette[subcategory];
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (!InsideShape(kind, (x - cx) / rx, (y - cy) / ry)) continue;
      out.image.set(x, y, {Jitter(color.r, 12, rng), Jitter(color.g, 12, rng),
                           Jitter(color.b, 12, rng)});
      out.mask.assign(x, y, true);
    }
  }
  return out;
}

Catalog WriteSyntheticCatalog(const std::filesystem::path& dir,
                              const SyntheticCatalogOptions& options) {
  if (options.subcategories < 1 ||
      options.subcategories > kSyntheticPaletteSize) {
    Fail(ErrorCode::kInvalidInput, "subcategories must be in [1, 8]");
  }
  if (options.per_subcategory < 1) {
    Fail(ErrorCode::kInvalidInput, "per_subcategory must be >= 1");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + (dir / "images").string());
  std::vector<CatalogEntry> entries;
  uint64_t stream = 0;
  for (int s = 0; s < options.subcategories; ++s) {
    for (int i = 0; i < options.per_subcategory; ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "item-%02d-%02d", s, i);
      const bool staged = i % 2 == 0;
      const SyntheticProduct p = MakeSyntheticProduct(
          options.size, s, staged, DeriveSeed(options.seed, stream++));
      const std::string rel = std::string("images/") + id + ".png";
      WritePng(dir / rel, p.image);
      CatalogEntry e;
      e.id = id;
      e.image_path = rel;
      e.category_path = {kCategories[s][0], kCategories[s][1]};
      e.staged = staged;
      e.impressions = 100 * (s + 1) + i;
      entries.push_back(std::move(e));
    }
  }
  Catalog catalog(std::move(entries), dir);
  WriteCatalog(dir / "catalog.jsonl", catalog);
  return catalog;
}

}  // namespace prodstage
