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
#include "prodstage/nn/tensor.h"

#include <algorithm>
#include <cstring>

#include "prodstage/error.h"

namespace prodstage::nn {

void Tensor::Fill(float v) { std::fill(data_.begin(), data_.end(), v); }

Tensor& Tensor::operator+=(const Tensor& o) {
  if (!same_shape(o)) Fail(ErrorCode::kInvalidInput, "tensor shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor ConcatChannels(std::span<const Tensor* const> parts) {
  if (parts.empty()) return {};
  const Tensor& first = *parts.front();
  int channels = 0;
  for (const Tensor* t : parts) {
    if (t->n() != first.n() || t->h() != first.h() || t->w() != first.w()) {
      Fail(ErrorCode::kInvalidInput, "ConcatChannels: shape mismatch");
    }
    channels += t->c();
  }
  Tensor out(first.n(), channels, first.h(), first.w());
  for (int i = 0; i < first.n(); ++i) {
    float* dst = out.sample(i);
    for (const Tensor* t : parts) {
      std::memcpy(dst, t->sample(i), t->sample_size() * sizeof(float));
      dst += t->sample_size();
    }
  }
  return out;
}

Tensor SliceChannels(const Tensor& x, int begin, int count) {
  if (begin < 0 || count < 0 || begin + count > x.c()) {
    Fail(ErrorCode::kInvalidInput, "SliceChannels: range out of bounds");
  }
  Tensor out(x.n(), count, x.h(), x.w());
  for (int i = 0; i < x.n(); ++i) {
    std::memcpy(out.sample(i), x.channel(i, begin),
                out.sample_size() * sizeof(float));
  }
  return out;
}

}  // namespace prodstage::nn
