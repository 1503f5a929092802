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
#ifndef PRODSTAGE_NN_ARCHITECTURES_H_
#define PRODSTAGE_NN_ARCHITECTURES_H_

#include <vector>

#include "prodstage/nn/layers.h"

namespace prodstage::nn {

// Encoder-decoder: full-res conv, one stride-2 downsample, dilated residual
// blocks (dilation 2 and 4), nearest upsample, sigmoid output. Input sides
// must be even.
Sequential MakeGenerator(int in_channels, int out_channels, int base_channels,
                         Rng& rng);

// Patch discriminator producing logits at 1/4 resolution.
Sequential MakePatchDiscriminator(int in_channels, int base_channels, Rng& rng);

// Layers of the patch discriminator whose activations feed feature matching.
const std::vector<int>& DiscriminatorFeatureTaps();

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_ARCHITECTURES_H_
