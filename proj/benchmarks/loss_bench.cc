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


#include <benchmark/benchmark.h>

#include "prodstage/boundary_loss.h"
#include "prodstage/image.h"
#include "prodstage/rng.h"

namespace {

using namespace prodstage;

BinaryMask Disc(int side) {
  BinaryMask m(side, side, false);
  const double r = side / 3.0;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double dx = x - side / 2.0;
      const double dy = y - side / 2.0;
      m.assign(x, y, dx * dx + dy * dy <= r * r);
    }
  }
  return m;
}

void BM_WeightMap(benchmark::State& state) {
  const BinaryMask mask = Disc(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(WeightMap(mask));
}
BENCHMARK(BM_WeightMap)->Arg(64)->Arg(256);

void BM_WeightedBoundaryLoss(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(3);
  EdgeMap gt(side, side, 0.0);
  EdgeMap pred(side, side, 0.0);
  for (double& v : gt.values()) v = rng.Bernoulli(0.1) ? 1.0 : 0.0;
  for (double& v : pred.values()) v = rng.Uniform();
  const WeightedMap w = WeightMap(Disc(side));
  for (auto _ : state) benchmark::DoNotOptimize(WeightedBoundaryLoss(gt, pred, w));
}
BENCHMARK(BM_WeightedBoundaryLoss)->Arg(64)->Arg(256);

}  // namespace
