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
#ifndef PRODSTAGE_INPAINTER_H_
#define PRODSTAGE_INPAINTER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prodstage/boundary_loss.h"
#include "prodstage/edges.h"
#include "prodstage/freeform_mask.h"
#include "prodstage/image.h"
#include "prodstage/nn/checkpoint.h"
#include "prodstage/nn/layers.h"

namespace prodstage {

// Anything that can propose content for a hole.
class Inpainter {
 public:
  virtual ~Inpainter() = default;
  // Full-frame proposal; callers only keep its hole pixels.
  virtual Image Generate(const Image& img, const BinaryMask& hole) const = 0;
};

// out = img outside the hole, generated content inside. Throws kInvalidInput
// when img and hole differ in size.
Image Inpaint(const Inpainter& inpainter, const Image& img,
              const BinaryMask& hole);

struct InpainterConfig {
  int resolution = 64;
  int base_channels = 16;
  int batch_size = 4;
  LossWeights weights;
  bool use_wbl = true;
  // Completion stage: l1_weight * L1 + completion_adv_weight * L_adv.
  double l1_weight = 1.0;
  double completion_adv_weight = 0.1;
  float generator_lr = 1e-3f;
  float discriminator_lr = 2e-4f;
  FreeFormMaskParams masks;
  CannyOptions canny;
  uint64_t seed = kDefaultSeed;
};

inline constexpr char kInpainterKind[] = "prodstage.inpainter";

// Two-stage (edge, then completion) generator pair with their patch
// discriminators.
class InpainterModel final : public Inpainter {
 public:
  // Freshly initialized weights derived from config.seed.
  explicit InpainterModel(const InpainterConfig& config);
  InpainterModel(InpainterModel&&) = default;
  InpainterModel& operator=(InpainterModel&&) = default;

  Image Generate(const Image& img, const BinaryMask& hole) const override;

  // Edge-stage prediction for the whole frame.
  EdgeMap PredictEdges(const Image& img, const BinaryMask& hole) const;

  const InpainterConfig& config() const { return config_; }
  int resolution() const { return config_.resolution; }

  nn::Checkpoint ToCheckpoint() const;
  static InpainterModel FromCheckpoint(const nn::Checkpoint& ckpt);
  void Save(const std::filesystem::path& path) const;
  static InpainterModel Load(const std::filesystem::path& path);

 private:
  friend class InpainterTrainer;

  std::vector<nn::ParamRef> AllParams() const;
  void CheckInput(const Image& img, const BinaryMask& hole) const;

  InpainterConfig config_;
  mutable nn::Sequential edge_generator_;
  mutable nn::Sequential completion_generator_;
  mutable nn::Sequential edge_discriminator_;
  mutable nn::Sequential completion_discriminator_;
};

struct InpaintStepLog {
  int step = 0;
  double wbl = 0.0;        // L_WBL on the edge prediction
  double edge_l1 = 0.0;    // plain mean L1 on the edge prediction
  double edge_adv = 0.0;
  double edge_fm = 0.0;
  double edge_disc = 0.0;
  double completion_l1 = 0.0;
  double completion_adv = 0.0;
  double completion_disc = 0.0;
};

struct InpaintTrainOptions {
  InpainterConfig config;
  std::vector<InpaintStepLog>* log = nullptr;
};

// Deterministic given the seed. Requires >= 8 images of identical even size
// and steps >= 1. Throws kTrainingDiverged with the step number on a
// non-finite loss.
InpainterModel TrainInpainter(std::span<const Image> images,
                              const LossWeights& weights, int steps,
                              uint64_t seed, bool use_wbl,
                              InpaintTrainOptions options = {});

}  // namespace prodstage

#endif  // PRODSTAGE_INPAINTER_H_
