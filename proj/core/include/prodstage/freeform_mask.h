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
#ifndef PRODSTAGE_FREEFORM_MASK_H_
#define PRODSTAGE_FREEFORM_MASK_H_

#include <cstdint>

#include "prodstage/image.h"
#include "prodstage/rng.h"

namespace prodstage {

struct IntRange {
  int lo = 0;
  int hi = 0;  // inclusive
};

// Random brush-stroke holes in the style of free-form inpainting masks.
// Ranges are expressed at a 256-pixel canvas; see ScaledFor().
struct FreeFormMaskParams {
  IntRange strokes{1, 4};
  IntRange vertices_per_stroke{4, 12};
  IntRange brush_width{5, 25};
  // Segment length as a fraction of the canvas side.
  double min_segment = 1.0 / 16.0;
  double max_segment = 1.0 / 6.0;
  // Maximum turn between consecutive segments, radians.
  double max_turn = 2.0 * 3.14159265358979323846 / 5.0;
  double min_area_fraction = 0.05;
  double max_area_fraction = 0.45;
  int max_attempts = 100;
  uint64_t seed = kDefaultSeed;

  // Brush widths rescaled from the 256-pixel reference to `size`.
  FreeFormMaskParams ScaledFor(int size) const;
};

// Union of round-capped polyline strokes; redrawn until the hole covers a
// fraction of the canvas inside [min_area_fraction, max_area_fraction].
// Throws kGeneration after max_attempts failures, kInvalidInput for
// size < 32.
BinaryMask GenerateFreeformMask(const FreeFormMaskParams& params, int size);

// Rasterizes a capsule (segment with radius) into `mask`.
void DrawCapsule(BinaryMask& mask, Point2 a, Point2 b, double radius);

}  // namespace prodstage

#endif  // PRODSTAGE_FREEFORM_MASK_H_
