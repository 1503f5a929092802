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
#include "prodstage/nn/architectures.h"

namespace prodstage::nn {

Sequential MakeGenerator(int in_channels, int out_channels, int base_channels,
                         Rng& rng) {
  const int c = base_channels;
  Sequential net;
  net.Emplace<Conv2d>(ConvSpec{in_channels, c, 3, 1, 1, 1}, rng);
  net.Emplace<ReLU>();
  net.Emplace<Conv2d>(ConvSpec{c, 2 * c, 4, 2, 1, 1}, rng);
  net.Emplace<ReLU>();
  net.Emplace<ResidualBlock>(2 * c, 2, rng);
  net.Emplace<ResidualBlock>(2 * c, 4, rng);
  net.Emplace<Upsample2x>();
  net.Emplace<Conv2d>(ConvSpec{2 * c, c, 3, 1, 1, 1}, rng);
  net.Emplace<ReLU>();
  net.Emplace<Conv2d>(ConvSpec{c, out_channels, 3, 1, 1, 1}, rng, 0.5f);
  net.Emplace<Sigmoid>();
  return net;
}

Sequential MakePatchDiscriminator(int in_channels, int base_channels,
                                  Rng& rng) {
  const int c = base_channels;
  Sequential net;
  net.Emplace<Conv2d>(ConvSpec{in_channels, c, 4, 2, 1, 1}, rng);
  net.Emplace<ReLU>(0.2f);
  net.Emplace<Conv2d>(ConvSpec{c, 2 * c, 4, 2, 1, 1}, rng);
  net.Emplace<ReLU>(0.2f);
  net.Emplace<Conv2d>(ConvSpec{2 * c, 1, 3, 1, 1, 1}, rng);
  return net;
}

const std::vector<int>& DiscriminatorFeatureTaps() {
  static const std::vector<int> taps = {1, 3};
  return taps;
}

}  // namespace prodstage::nn
