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
#ifndef PRODSTAGE_SRC_NN_GAN_STEP_H_
#define PRODSTAGE_SRC_NN_GAN_STEP_H_

#include "prodstage/nn/layers.h"
#include "prodstage/nn/optim.h"

namespace prodstage::nn {

// One non-saturating discriminator update on (real -> 1, fake -> 0).
double UpdateDiscriminator(Sequential& disc, Adam& opt, const Tensor& real,
                           const Tensor& fake);

struct AdversarialTerms {
  double adversarial = 0.0;
  double feature_matching = 0.0;
  // Gradient of w_adv * adversarial + w_fm * feature_matching with respect
  // to the discriminator input `fake`.
  Tensor grad_fake;
};

// Generator-side terms. Feature matching is the sum over tapped layers of the
// mean absolute activation difference between real and fake. Leaves junk in
// the discriminator's gradient buffers; UpdateDiscriminator clears them.
AdversarialTerms GeneratorAdversarial(Sequential& disc, const Tensor& real,
                                      const Tensor& fake, double w_adv,
                                      double w_fm);

}  // namespace prodstage::nn

#endif  // PRODSTAGE_SRC_NN_GAN_STEP_H_
