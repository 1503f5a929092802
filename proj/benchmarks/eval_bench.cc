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

#include <vector>

#include "prodstage/evaluation.h"
#include "prodstage/rng.h"

namespace {

using namespace prodstage;

std::vector<std::vector<double>> Rows(Rng& rng, int n, int d) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (double& v : row) v = rng.Normal();
  }
  return rows;
}

void BM_GaussianFit(benchmark::State& state) {
  Rng rng(4);
  const auto rows = Rows(rng, 512, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(GaussianFit(rows));
}
BENCHMARK(BM_GaussianFit)->Arg(12)->Arg(64);

void BM_Fid(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(5);
  const GaussianStats a = GaussianFit(Rows(rng, 4 * d, d));
  const GaussianStats b = GaussianFit(Rows(rng, 4 * d, d));
  for (auto _ : state) benchmark::DoNotOptimize(Fid(a, b));
}
BENCHMARK(BM_Fid)->Arg(12)->Arg(64)->Arg(256);

}  // namespace
