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
#ifndef PRODSTAGE_METRICS_H_
#define PRODSTAGE_METRICS_H_

#include <cstddef>
#include <vector>

namespace prodstage {

struct PrecisionRecallAtK {
  int k = 1;
  double precision = 0.0;
  // Hit rate: fraction of queries with at least one relevant item in top-k.
  double recall = 0.0;
};

struct RetrievalMetrics {
  std::vector<PrecisionRecallAtK> at_k;
  std::size_t n_queries = 0;
};

}  // namespace prodstage

#endif  // PRODSTAGE_METRICS_H_
