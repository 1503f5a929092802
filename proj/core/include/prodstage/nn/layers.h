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
#ifndef PRODSTAGE_NN_LAYERS_H_
#define PRODSTAGE_NN_LAYERS_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prodstage/nn/tensor.h"
#include "prodstage/rng.h"

namespace prodstage::nn {

struct ParamRef {
  std::string name;
  std::vector<int> shape;
  std::vector<float>* value = nullptr;
  std::vector<float>* grad = nullptr;
};

// Apply() is the pure inference path and may be called concurrently.
// Forward() caches what Backward() needs; Backward() returns the input
// gradient and accumulates parameter gradients.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor Apply(const Tensor& x) const = 0;
  virtual Tensor Forward(const Tensor& x) = 0;
  virtual Tensor Backward(const Tensor& grad_out) = 0;
  virtual void CollectParams(const std::string& /*prefix*/,
                             std::vector<ParamRef>& /*out*/) {}
};

struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;
  int padding = 1;
  int dilation = 1;
};

class Conv2d final : public Layer {
 public:
  Conv2d(const ConvSpec& spec, Rng& rng, float init_gain = 1.0f);

  Tensor Apply(const Tensor& x) const override;
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  void CollectParams(const std::string& prefix,
                     std::vector<ParamRef>& out) override;

  int OutputSize(int in) const {
    return (in + 2 * spec_.padding - spec_.dilation * (spec_.kernel - 1) - 1) /
               spec_.stride +
           1;
  }

 private:
  void Im2Col(const float* src, int h, int w, int oh, int ow,
              float* col) const;
  void Col2Im(const float* col, int h, int w, int oh, int ow,
              float* dst) const;

  ConvSpec spec_;
  std::vector<float> weight_;  // [out, in * k * k]
  std::vector<float> bias_;
  std::vector<float> grad_weight_;
  std::vector<float> grad_bias_;
  Tensor input_;
};

class ReLU final : public Layer {
 public:
  explicit ReLU(float negative_slope = 0.0f) : slope_(negative_slope) {}
  Tensor Apply(const Tensor& x) const override;
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;

 private:
  float slope_;
  Tensor input_;
};

class Sigmoid final : public Layer {
 public:
  Tensor Apply(const Tensor& x) const override;
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;

 private:
  Tensor output_;
};

// Nearest-neighbour 2x upsampling.
class Upsample2x final : public Layer {
 public:
  Tensor Apply(const Tensor& x) const override;
  Tensor Forward(const Tensor& x) override { return Apply(x); }
  Tensor Backward(const Tensor& grad_out) override;
};

class Sequential : public Layer {
 public:
  Sequential() = default;
  Sequential(Sequential&&) = default;
  Sequential& operator=(Sequential&&) = default;

  Sequential& Add(std::unique_ptr<Layer> layer);
  template <typename L, typename... Args>
  Sequential& Emplace(Args&&... args) {
    return Add(std::make_unique<L>(std::forward<Args>(args)...));
  }

  std::size_t size() const { return layers_.size(); }

  Tensor Apply(const Tensor& x) const override;
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  void CollectParams(const std::string& prefix,
                     std::vector<ParamRef>& out) override;

  // Forward that also records the outputs of the layers listed in `taps`.
  Tensor ForwardWithTaps(const Tensor& x, const std::vector<int>& taps,
                         std::vector<Tensor>* tapped);
  // Backward with extra gradients injected at tapped layer outputs.
  Tensor BackwardWithTaps(const Tensor& grad_out, const std::vector<int>& taps,
                          const std::vector<Tensor>& tap_grads);

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

// x + conv(relu(conv(x))), both convs channel-preserving and dilated.
class ResidualBlock final : public Layer {
 public:
  ResidualBlock(int channels, int dilation, Rng& rng);
  Tensor Apply(const Tensor& x) const override;
  Tensor Forward(const Tensor& x) override;
  Tensor Backward(const Tensor& grad_out) override;
  void CollectParams(const std::string& prefix,
                     std::vector<ParamRef>& out) override;

 private:
  Sequential body_;
};

std::vector<ParamRef> Parameters(Layer& layer, const std::string& prefix);
void ZeroGrad(const std::vector<ParamRef>& params);

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_LAYERS_H_
