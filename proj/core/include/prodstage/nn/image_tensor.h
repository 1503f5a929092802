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
#ifndef PRODSTAGE_NN_IMAGE_TENSOR_H_
#define PRODSTAGE_NN_IMAGE_TENSOR_H_

#include <span>

#include "prodstage/image.h"
#include "prodstage/nn/tensor.h"

namespace prodstage::nn {

// Writes `img` as 3 channels in [0,1] into sample `index` of `out`.
void StoreImage(const Image& img, Tensor& out, int index);
void StoreMask(const BinaryMask& mask, Tensor& out, int index);
void StorePlane(const Plane<double>& plane, Tensor& out, int index);
void StorePlane(const Plane<float>& plane, Tensor& out, int index);

Tensor ImagesToTensor(std::span<const Image> images);
// Clamps to [0,1] and rounds half up to 8 bits.
Image TensorToImage(const Tensor& t, int index);
Plane<double> TensorToPlane(const Tensor& t, int index, int channel = 0);

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_IMAGE_TENSOR_H_
