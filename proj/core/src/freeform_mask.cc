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
#include "prodstage/freeform_mask.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "prodstage/error.h"

namespace prodstage {

namespace {

double SegmentDistance2(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  }
  const double dx = p.x - (a.x + t * vx);
  const double dy = p.y - (a.y + t * vy);
  return dx * dx + dy * dy;
}

BinaryMask DrawStrokes(const FreeFormMaskParams& p, int size, Rng& rng) {
  BinaryMask mask(size, size);
  const int strokes = rng.UniformInt(p.strokes.lo, p.strokes.hi);
  for (int s = 0; s < strokes; ++s) {
    const int vertices =
        rng.UniformInt(p.vertices_per_stroke.lo, p.vertices_per_stroke.hi);
    const double radius = rng.UniformInt(p.brush_width.lo, p.brush_width.hi) / 2.0;
    Point2 cur{rng.Uniform(0.0, size - 1.0), rng.Uniform(0.0, size - 1.0)};
    double heading = rng.Uniform(0.0, 2.0 * 3.14159265358979323846);
    for (int v = 0; v < vertices; ++v) {
      heading += rng.Uniform(-p.max_turn, p.max_turn);
      const double len = rng.Uniform(p.min_segment, p.max_segment) * size;
      Point2 next{std::clamp(cur.x + len * std::cos(heading), 0.0, size - 1.0),
                  std::clamp(cur.y + len * std::sin(heading), 0.0, size - 1.0)};
      DrawCapsule(mask, cur, next, radius);
      cur = next;
    }
  }
  return mask;
}

}  // namespace

FreeFormMaskParams FreeFormMaskParams::ScaledFor(int size) const {
  FreeFormMaskParams out = *this;
  const double f = size / 256.0;
  out.brush_width.lo = std::max(2, static_cast<int>(std::lround(brush_width.lo * f)));
  out.brush_width.hi = std::max(out.brush_width.lo,
                                static_cast<int>(std::lround(brush_width.hi * f)));
  return out;
}

void DrawCapsule(BinaryMask& mask, Point2 a, Point2 b, double radius) {
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
  const int x1 = std::min(mask.width() - 1,
                          static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
  const int y1 = std::min(mask.height() - 1,
                          static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (SegmentDistance2({double(x), double(y)}, a, b) <= r2) {
        mask.assign(x, y, true);
      }
    }
  }
}

BinaryMask GenerateFreeformMask(const FreeFormMaskParams& params, int size) {
  if (size < 32) {
    Fail(ErrorCode::kInvalidInput, "free-form mask size must be >= 32");
  }
  if (params.strokes.lo < 1 || params.strokes.hi < params.strokes.lo ||
      params.vertices_per_stroke.lo < 1 ||
      params.vertices_per_stroke.hi < params.vertices_per_stroke.lo ||
      params.brush_width.lo < 1 || params.brush_width.hi < params.brush_width.lo) {
    Fail(ErrorCode::kInvalidInput, "free-form mask parameter ranges are invalid");
  }
  Rng rng(params.seed);
  const double total = static_cast<double>(size) * size;
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    BinaryMask mask = DrawStrokes(params, size, rng);
    const double fraction = static_cast<double>(mask.count()) / total;
    if (fraction >= params.min_area_fraction &&
        fraction <= params.max_area_fraction) {
      return mask;
    }
  }
  Fail(ErrorCode::kGeneration,
       "free-form mask: area bounds unsatisfied after " +
           std::to_string(params.max_attempts) + " attempts");
}

}  // namespace prodstage
