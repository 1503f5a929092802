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

#ifndef PRODSTAGE_SYNTHETIC_H_
#define PRODSTAGE_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "prodstage/catalog.h"
#include "prodstage/image.h"
#include "prodstage/rng.h"

namespace prodstage {

// Gradient backdrop with a few solid rectangles and discs.
Image MakeShapeScene(int size, uint64_t seed);
std::vector<Image> MakeShapeScenes(int count, int size, uint64_t seed);

inline constexpr int kSyntheticPaletteSize = 8;

struct SyntheticProduct {
  Image image;
  BinaryMask mask;
};

// A product of subcategory `subcategory` (its colour and silhouette are
// fixed per subcategory; size and placement vary with the seed), on white
// or on a wall-and-floor scene.
SyntheticProduct MakeSyntheticProduct(int size, int subcategory, bool staged,
                                      uint64_t seed);

struct SyntheticCatalogOptions {
  int subcategories = 4;       // at most kSyntheticPaletteSize
  int per_subcategory = 6;
  int size = 64;
  uint64_t seed = kDefaultSeed;
};

// Writes <dir>/images/<id>.png and <dir>/catalog.jsonl. Within each
// subcategory, even-numbered items are staged.
Catalog WriteSyntheticCatalog(const std::filesystem::path& dir,
                              const SyntheticCatalogOptions& options = {});

}  // namespace prodstage

#endif  // PRODSTAGE_SYNTHETIC_H_
