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
#include "nn/gan_step.h"

#include <cmath>

#include "prodstage/nn/architectures.h"
#include "prodstage/nn/loss.h"

namespace prodstage::nn {

double UpdateDiscriminator(Sequential& disc, Adam& opt, const Tensor& real,
                           const Tensor& fake) {
  opt.ZeroGrad();
  LossAndGrad real_loss = BceWithLogits(disc.Forward(real), 1.0f);
  disc.Backward(real_loss.grad);
  LossAndGrad fake_loss = BceWithLogits(disc.Forward(fake), 0.0f);
  disc.Backward(fake_loss.grad);
  opt.Step();
  return real_loss.loss + fake_loss.loss;
}

AdversarialTerms GeneratorAdversarial(Sequential& disc, const Tensor& real,
                                      const Tensor& fake, double w_adv,
                                      double w_fm) {
  const std::vector<int>& taps = DiscriminatorFeatureTaps();
  std::vector<Tensor> real_feats;
  std::vector<Tensor> fake_feats;
  AdversarialTerms out;
  if (w_fm != 0.0) disc.ForwardWithTaps(real, taps, &real_feats);
  const Tensor logits = disc.ForwardWithTaps(fake, taps, &fake_feats);
  LossAndGrad adv = BceWithLogits(logits, 1.0f);
  out.adversarial = adv.loss;
  for (float& g : adv.grad.vec()) g = static_cast<float>(g * w_adv);

  std::vector<Tensor> tap_grads(taps.size());
  if (w_fm != 0.0) {
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const Tensor& f = fake_feats[t];
      const Tensor& r = real_feats[t];
      tap_grads[t] = Tensor(f.n(), f.c(), f.h(), f.w());
      const double inv_n = 1.0 / static_cast<double>(f.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = static_cast<double>(f.data()[i]) - r.data()[i];
        sum += std::abs(d);
        tap_grads[t].data()[i] = static_cast<float>(
            w_fm * inv_n * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)));
      }
      out.feature_matching += sum * inv_n;
    }
  }
  out.grad_fake = disc.BackwardWithTaps(adv.grad, taps, tap_grads);
  return out;
}

}  // namespace prodstage::nn
