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
#include "prodstage/boundary_loss.h"

#include <cmath>

#include "prodstage/error.h"

namespace prodstage {

void LossWeights::Validate() const {
  if (!(lambda_boundary > lambda_non_boundary) || lambda_non_boundary < 0.0) {
    Fail(ErrorCode::kInvalidInput,
         "loss weights require lambda_boundary > lambda_non_boundary >= 0");
  }
  if (band_width_d < 1) {
    Fail(ErrorCode::kInvalidInput, "band width must be >= 1");
  }
}

BinaryMask BoundaryBand(const BinaryMask& mask, int d) {
  if (d < 1) Fail(ErrorCode::kInvalidInput, "BoundaryBand: d must be >= 1");
  const BinaryMask grown = Dilate(mask, d);
  const BinaryMask shrunk = Erode(mask, d);
  BinaryMask band(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    band[i] = (grown[i] != shrunk[i]) ? 1 : 0;
  }
  return band;
}

WeightedMap WeightMap(const BinaryMask& mask, const LossWeights& weights) {
  weights.Validate();
  const BinaryMask band = BoundaryBand(mask, weights.band_width_d);
  WeightedMap map(mask.width(), mask.height());
  const double on = weights.lambda_boundary;
  const double off = weights.lambda_non_boundary;
  for (std::size_t i = 0; i < band.size(); ++i) map[i] = band[i] ? on : off;
  return map;
}

double WeightedBoundaryLoss(const EdgeMap& gt, const EdgeMap& pred,
                            const WeightedMap& weights) {
  if (gt.width() != pred.width() || gt.height() != pred.height() ||
      gt.width() != weights.width() || gt.height() != weights.height()) {
    Fail(ErrorCode::kInvalidInput, "WeightedBoundaryLoss: dimension mismatch");
  }
  if (gt.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    total += weights[i] * std::abs(gt[i] - pred[i]);
  }
  return total / static_cast<double>(gt.size());
}

}  // namespace prodstage
