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
#include "prodstage/nn/layers.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstring>

#include "prodstage/error.h"

namespace prodstage::nn {

namespace {

using RowMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

}  // namespace

Conv2d::Conv2d(const ConvSpec& spec, Rng& rng, float init_gain) : spec_(spec) {
  const int fan_in = spec.in_channels * spec.kernel * spec.kernel;
  const std::size_t count =
      static_cast<std::size_t>(spec.out_channels) * fan_in;
  weight_.resize(count);
  // He-normal.
  const double stddev = init_gain * std::sqrt(2.0 / fan_in);
  for (float& w : weight_) w = static_cast<float>(rng.Normal() * stddev);
  bias_.assign(spec.out_channels, 0.0f);
  grad_weight_.assign(count, 0.0f);
  grad_bias_.assign(spec.out_channels, 0.0f);
}

void Conv2d::Im2Col(const float* src, int h, int w, int oh, int ow,
                    float* col) const {
  const int k = spec_.kernel;
  const std::size_t plane = static_cast<std::size_t>(oh) * ow;
  for (int c = 0; c < spec_.in_channels; ++c) {
    const float* chan = src + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        float* row = col + ((static_cast<std::size_t>(c) * k + ky) * k + kx) * plane;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * spec_.stride - spec_.padding + ky * spec_.dilation;
          float* dst = row + static_cast<std::size_t>(oy) * ow;
          if (iy < 0 || iy >= h) {
            std::fill(dst, dst + ow, 0.0f);
            continue;
          }
          const float* line = chan + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix =
                ox * spec_.stride - spec_.padding + kx * spec_.dilation;
            dst[ox] = (ix >= 0 && ix < w) ? line[ix] : 0.0f;
          }
        }
      }
    }
  }
}

void Conv2d::Col2Im(const float* col, int h, int w, int oh, int ow,
                    float* dst) const {
  const int k = spec_.kernel;
  const std::size_t plane = static_cast<std::size_t>(oh) * ow;
  for (int c = 0; c < spec_.in_channels; ++c) {
    float* chan = dst + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const float* row =
            col + ((static_cast<std::size_t>(c) * k + ky) * k + kx) * plane;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * spec_.stride - spec_.padding + ky * spec_.dilation;
          if (iy < 0 || iy >= h) continue;
          float* line = chan + static_cast<std::size_t>(iy) * w;
          const float* src = row + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix =
                ox * spec_.stride - spec_.padding + kx * spec_.dilation;
            if (ix >= 0 && ix < w) line[ix] += src[ox];
          }
        }
      }
    }
  }
}

Tensor Conv2d::Apply(const Tensor& x) const {
  if (x.c() != spec_.in_channels) {
    Fail(ErrorCode::kInvalidInput,
         "Conv2d: expected " + std::to_string(spec_.in_channels) +
             " channels, got " + std::to_string(x.c()));
  }
  const int oh = OutputSize(x.h());
  const int ow = OutputSize(x.w());
  const int kdim = spec_.in_channels * spec_.kernel * spec_.kernel;
  const int plane = oh * ow;
  Tensor out(x.n(), spec_.out_channels, oh, ow);
  std::vector<float> col(static_cast<std::size_t>(kdim) * plane);
  ConstMatrixMap weight(weight_.data(), spec_.out_channels, kdim);
  for (int i = 0; i < x.n(); ++i) {
    Im2Col(x.sample(i), x.h(), x.w(), oh, ow, col.data());
    MatrixMap result(out.sample(i), spec_.out_channels, plane);
    result.noalias() = weight * ConstMatrixMap(col.data(), kdim, plane);
    for (int o = 0; o < spec_.out_channels; ++o) {
      result.row(o).array() += bias_[o];
    }
  }
  return out;
}

Tensor Conv2d::Forward(const Tensor& x) {
  input_ = x;
  return Apply(x);
}

Tensor Conv2d::Backward(const Tensor& grad_out) {
  const Tensor& x = input_;
  const int oh = grad_out.h();
  const int ow = grad_out.w();
  const int kdim = spec_.in_channels * spec_.kernel * spec_.kernel;
  const int plane = oh * ow;
  Tensor grad_in(x.n(), x.c(), x.h(), x.w());
  std::vector<float> col(static_cast<std::size_t>(kdim) * plane);
  std::vector<float> grad_col(col.size());
  ConstMatrixMap weight(weight_.data(), spec_.out_channels, kdim);
  MatrixMap grad_weight(grad_weight_.data(), spec_.out_channels, kdim);
  for (int i = 0; i < x.n(); ++i) {
    Im2Col(x.sample(i), x.h(), x.w(), oh, ow, col.data());
    ConstMatrixMap g(grad_out.sample(i), spec_.out_channels, plane);
    ConstMatrixMap cols(col.data(), kdim, plane);
    grad_weight.noalias() += g * cols.transpose();
    for (int o = 0; o < spec_.out_channels; ++o) grad_bias_[o] += g.row(o).sum();
    MatrixMap gcol(grad_col.data(), kdim, plane);
    gcol.noalias() = weight.transpose() * g;
    Col2Im(grad_col.data(), x.h(), x.w(), oh, ow, grad_in.sample(i));
  }
  return grad_in;
}

void Conv2d::CollectParams(const std::string& prefix,
                           std::vector<ParamRef>& out) {
  out.push_back({prefix + "weight",
                 {spec_.out_channels, spec_.in_channels, spec_.kernel,
                  spec_.kernel},
                 &weight_,
                 &grad_weight_});
  out.push_back({prefix + "bias", {spec_.out_channels}, &bias_, &grad_bias_});
}

Tensor ReLU::Apply(const Tensor& x) const {
  Tensor out = x;
  for (float& v : out.vec()) {
    if (v < 0.0f) v *= slope_;
  }
  return out;
}

Tensor ReLU::Forward(const Tensor& x) {
  input_ = x;
  return Apply(x);
}

Tensor ReLU::Backward(const Tensor& grad_out) {
  Tensor grad = grad_out;
  const std::vector<float>& in = input_.vec();
  std::vector<float>& g = grad.vec();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (in[i] < 0.0f) g[i] *= slope_;
  }
  return grad;
}

Tensor Sigmoid::Apply(const Tensor& x) const {
  Tensor out = x;
  for (float& v : out.vec()) v = 1.0f / (1.0f + std::exp(-v));
  return out;
}

Tensor Sigmoid::Forward(const Tensor& x) {
  output_ = Apply(x);
  return output_;
}

Tensor Sigmoid::Backward(const Tensor& grad_out) {
  Tensor grad = grad_out;
  const std::vector<float>& y = output_.vec();
  std::vector<float>& g = grad.vec();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= y[i] * (1.0f - y[i]);
  return grad;
}

Tensor Upsample2x::Apply(const Tensor& x) const {
  Tensor out(x.n(), x.c(), x.h() * 2, x.w() * 2);
  for (int i = 0; i < x.n(); ++i) {
    for (int c = 0; c < x.c(); ++c) {
      const float* src = x.channel(i, c);
      float* dst = out.channel(i, c);
      for (int y = 0; y < out.h(); ++y) {
        for (int xx = 0; xx < out.w(); ++xx) {
          dst[static_cast<std::size_t>(y) * out.w() + xx] =
              src[static_cast<std::size_t>(y / 2) * x.w() + xx / 2];
        }
      }
    }
  }
  return out;
}

Tensor Upsample2x::Backward(const Tensor& grad_out) {
  Tensor grad(grad_out.n(), grad_out.c(), grad_out.h() / 2, grad_out.w() / 2);
  for (int i = 0; i < grad.n(); ++i) {
    for (int c = 0; c < grad.c(); ++c) {
      const float* src = grad_out.channel(i, c);
      float* dst = grad.channel(i, c);
      for (int y = 0; y < grad_out.h(); ++y) {
        for (int x = 0; x < grad_out.w(); ++x) {
          dst[static_cast<std::size_t>(y / 2) * grad.w() + x / 2] +=
              src[static_cast<std::size_t>(y) * grad_out.w() + x];
        }
      }
    }
  }
  return grad;
}

Sequential& Sequential::Add(std::unique_ptr<Layer> layer) {
  layers_.push_back(std::move(layer));
  return *this;
}

Tensor Sequential::Apply(const Tensor& x) const {
  Tensor h = x;
  for (const auto& layer : layers_) h = layer->Apply(h);
  return h;
}

Tensor Sequential::Forward(const Tensor& x) {
  Tensor h = x;
  for (auto& layer : layers_) h = layer->Forward(h);
  return h;
}

Tensor Sequential::Backward(const Tensor& grad_out) {
  Tensor g = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    g = (*it)->Backward(g);
  }
  return g;
}

Tensor Sequential::ForwardWithTaps(const Tensor& x,
                                   const std::vector<int>& taps,
                                   std::vector<Tensor>* tapped) {
  tapped->assign(taps.size(), Tensor());
  Tensor h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i]->Forward(h);
    for (std::size_t t = 0; t < taps.size(); ++t) {
      if (taps[t] == static_cast<int>(i)) (*tapped)[t] = h;
    }
  }
  return h;
}

Tensor Sequential::BackwardWithTaps(const Tensor& grad_out,
                                    const std::vector<int>& taps,
                                    const std::vector<Tensor>& tap_grads) {
  Tensor g = grad_out;
  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
    for (std::size_t t = 0; t < taps.size(); ++t) {
      if (taps[t] == i && tap_grads[t].size() > 0) g += tap_grads[t];
    }
    g = layers_[i]->Backward(g);
  }
  return g;
}

void Sequential::CollectParams(const std::string& prefix,
                               std::vector<ParamRef>& out) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->CollectParams(prefix + std::to_string(i) + ".", out);
  }
}

ResidualBlock::ResidualBlock(int channels, int dilation, Rng& rng) {
  ConvSpec spec{channels, channels, 3, 1, dilation, dilation};
  body_.Emplace<Conv2d>(spec, rng);
  body_.Emplace<ReLU>();
  // Near-identity at initialization.
  body_.Emplace<Conv2d>(ConvSpec{channels, channels, 3, 1, 1, 1}, rng, 0.1f);
}

Tensor ResidualBlock::Apply(const Tensor& x) const {
  Tensor out = body_.Apply(x);
  out += x;
  return out;
}

Tensor ResidualBlock::Forward(const Tensor& x) {
  Tensor out = body_.Forward(x);
  out += x;
  return out;
}

Tensor ResidualBlock::Backward(const Tensor& grad_out) {
  Tensor g = body_.Backward(grad_out);
  g += grad_out;
  return g;
}

void ResidualBlock::CollectParams(const std::string& prefix,
                                  std::vector<ParamRef>& out) {
  body_.CollectParams(prefix, out);
}

std::vector<ParamRef> Parameters(Layer& layer, const std::string& prefix) {
  std::vector<ParamRef> out;
  layer.CollectParams(prefix, out);
  return out;
}

void ZeroGrad(const std::vector<ParamRef>& params) {
  for (const ParamRef& p : params) {
    std::fill(p.grad->begin(), p.grad->end(), 0.0f);
  }
}

}  // namespace prodstage::nn
