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
#ifndef PRODSTAGE_NN_TENSOR_H_
#define PRODSTAGE_NN_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace prodstage::nn {

// Dense float32 NCHW tensor.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int c, int h, int w, float fill = 0.0f)
      : n_(n), c_(c), h_(h), w_(w),
        data_(static_cast<std::size_t>(n) * c * h * w, fill) {}

  int n() const { return n_; }
  int c() const { return c_; }
  int h() const { return h_; }
  int w() const { return w_; }
  std::size_t size() const { return data_.size(); }
  std::size_t sample_size() const {
    return static_cast<std::size_t>(c_) * h_ * w_;
  }
  std::size_t plane_size() const { return static_cast<std::size_t>(h_) * w_; }

  bool same_shape(const Tensor& o) const {
    return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  float* sample(int i) { return data_.data() + sample_size() * i; }
  const float* sample(int i) const { return data_.data() + sample_size() * i; }
  float* channel(int i, int c) { return sample(i) + plane_size() * c; }
  const float* channel(int i, int c) const {
    return sample(i) + plane_size() * c;
  }

  float& at(int i, int c, int y, int x) {
    return data_[((static_cast<std::size_t>(i) * c_ + c) * h_ + y) * w_ + x];
  }
  float at(int i, int c, int y, int x) const {
    return data_[((static_cast<std::size_t>(i) * c_ + c) * h_ + y) * w_ + x];
  }

  std::vector<float>& vec() { return data_; }
  const std::vector<float>& vec() const { return data_; }

  void Fill(float v);
  Tensor& operator+=(const Tensor& o);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  int n_ = 0;
  int c_ = 0;
  int h_ = 0;
  int w_ = 0;
  std::vector<float> data_;
};

// Concatenates along the channel axis; all inputs share n, h, w.
Tensor ConcatChannels(std::span<const Tensor* const> parts);
// Channels [begin, begin + count) of x.
Tensor SliceChannels(const Tensor& x, int begin, int count);

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_TENSOR_H_
