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
#ifndef PRODSTAGE_BOUNDARY_LOSS_H_
#define PRODSTAGE_BOUNDARY_LOSS_H_

#include "prodstage/image.h"

namespace prodstage {

struct LossWeights {
  double lambda_boundary = 0.9;
  double lambda_non_boundary = 0.1;
  int band_width_d = 3;
  // Edge-stage objective: w_adv * L_adv + w_fm * L_fm + w_wbl * L_wbl.
  double w_adv = 1.0;
  double w_fm = 10.0;
  double w_wbl = 1.0;

  // Throws kInvalidInput unless lambda_boundary > lambda_non_boundary >= 0
  // and band_width_d >= 1.
  void Validate() const;
};

// Pixels within Chebyshev distance d of a pixel of the opposite value:
// Dilate(mask, d) xor Erode(mask, d). The image border is not a boundary.
BinaryMask BoundaryBand(const BinaryMask& mask, int d);

// lambda_boundary on BoundaryBand(mask, d), lambda_non_boundary elsewhere.
WeightedMap WeightMap(const BinaryMask& mask, const LossWeights& weights = {});

// mean_p W[p] * |gt[p] - pred[p]|.
double WeightedBoundaryLoss(const EdgeMap& gt, const EdgeMap& pred,
                            const WeightedMap& weights);

}  // namespace prodstage

#endif  // PRODSTAGE_BOUNDARY_LOSS_H_
