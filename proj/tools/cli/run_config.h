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

#ifndef PRODSTAGE_TOOLS_CLI_RUN_CONFIG_H_
#define PRODSTAGE_TOOLS_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "prodstage/boundary_loss.h"
#include "prodstage/parallax.h"
#include "prodstage/rng.h"

namespace prodstage::cli {

// Everything a pipeline run can be configured with. Values come from the
// defaults below, then the --config file, then command line flags.
struct RunConfig {
  // [run]
  uint64_t seed = kDefaultSeed;
  int jobs = 1;
  std::filesystem::path out = ".";

  // [saliency]
  std::string saliency_backend = "border-contrast";
  std::filesystem::path saliency_model;
  double saliency_threshold = 0.5;

  // [retrieval]
  std::string extractor = "toy-histogram";
  std::filesystem::path extractor_model;
  int frame_size = 64;
  int k = 2;

  // [inpaint]
  int inpaint_steps = 300;
  int inpaint_resolution = 64;
  int inpaint_base_channels = 16;
  int inpaint_batch_size = 4;
  bool use_wbl = true;
  LossWeights weights;

  // [vanilla]
  int vanilla_steps = 300;
  double vanilla_l1_weight = 100.0;

  // [parallax]
  ParallaxConfig parallax;
};

// INI file with one section per module; unknown keys are a configuration
// error so typos do not go unnoticed.
RunConfig LoadRunConfig(const std::filesystem::path& path,
                        RunConfig base = {});

}  // namespace prodstage::cli

#endif  // PRODSTAGE_TOOLS_CLI_RUN_CONFIG_H_
