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
#ifndef PRODSTAGE_NN_OPTIM_H_
#define PRODSTAGE_NN_OPTIM_H_

#include <vector>

#include "prodstage/nn/layers.h"

namespace prodstage::nn {

struct AdamOptions {
  float learning_rate = 2e-4f;
  float beta1 = 0.5f;
  float beta2 = 0.999f;
  float epsilon = 1e-8f;
};

class Adam {
 public:
  Adam(std::vector<ParamRef> params, AdamOptions options);

  void Step();
  void ZeroGrad() { nn::ZeroGrad(params_); }
  const std::vector<ParamRef>& params() const { return params_; }

 private:
  std::vector<ParamRef> params_;
  AdamOptions options_;
  std::vector<std::vector<float>> m_;
  std::vector<std::vector<float>> v_;
  long step_ = 0;
};

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_OPTIM_H_
