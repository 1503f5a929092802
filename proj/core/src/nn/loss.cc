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
#include "prodstage/nn/loss.h"

#include <algorithm>
#include <cmath>

#include "prodstage/error.h"

namespace prodstage::nn {

LossAndGrad BceWithLogits(const Tensor& logits, float target) {
  LossAndGrad out;
  out.grad = Tensor(logits.n(), logits.c(), logits.h(), logits.w());
  const double inv_n = 1.0 / static_cast<double>(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double x = logits.data()[i];
    // softplus(x) - target * x, written stably.
    const double softplus = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    total += softplus - target * x;
    const double sig = 1.0 / (1.0 + std::exp(-x));
    out.grad.data()[i] = static_cast<float>((sig - target) * inv_n);
  }
  out.loss = total * inv_n;
  return out;
}

LossAndGrad MeanL1(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target)) {
    Fail(ErrorCode::kInvalidInput, "MeanL1: shape mismatch");
  }
  LossAndGrad out;
  out.grad = Tensor(pred.n(), pred.c(), pred.h(), pred.w());
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred.data()[i]) - target.data()[i];
    total += std::abs(d);
    out.grad.data()[i] =
        static_cast<float>((d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * inv_n);
  }
  out.loss = total * inv_n;
  return out;
}

}  // namespace prodstage::nn
