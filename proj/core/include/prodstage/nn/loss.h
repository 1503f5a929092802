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
#ifndef PRODSTAGE_NN_LOSS_H_
#define PRODSTAGE_NN_LOSS_H_

#include "prodstage/nn/tensor.h"

namespace prodstage::nn {

struct LossAndGrad {
  double loss = 0.0;
  Tensor grad;  // d loss / d input, same shape as the input
};

// Mean binary cross-entropy on logits against a constant target in {0, 1}.
LossAndGrad BceWithLogits(const Tensor& logits, float target);

// Mean absolute error; the subgradient at zero is zero.
LossAndGrad MeanL1(const Tensor& pred, const Tensor& target);

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_LOSS_H_
