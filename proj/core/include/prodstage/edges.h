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
#ifndef PRODSTAGE_EDGES_H_
#define PRODSTAGE_EDGES_H_

#include "prodstage/image.h"

namespace prodstage {

struct CannyOptions {
  double sigma = 2.0;
  // Hysteresis thresholds as fractions of the gradient-magnitude range.
  double low = 0.1;
  double high = 0.2;
};

// Binary Canny edge map of the luma channel.
EdgeMap ExtractEdges(const Image& img, const CannyOptions& options = {});
EdgeMap CannyEdges(const Plane<float>& gray, const CannyOptions& options = {});

}  // namespace prodstage

#endif  // PRODSTAGE_EDGES_H_
