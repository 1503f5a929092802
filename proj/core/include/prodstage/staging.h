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
#ifndef PRODSTAGE_STAGING_H_
#define PRODSTAGE_STAGING_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prodstage/catalog.h"
#include "prodstage/image.h"
#include "prodstage/inpainter.h"
#include "prodstage/nn/checkpoint.h"
#include "prodstage/nn/layers.h"
#include "prodstage/retrieval.h"
#include "prodstage/saliency.h"

namespace prodstage {

// An input that was dropped from a batch operation, with the reason.
struct SkipRecord {
  std::string id;
  std::string reason;
  friend bool operator==(const SkipRecord&, const SkipRecord&) = default;
};

// ---------------------------------------------------------------------------
// Vanilla staging (conditional GAN on cutout -> staged image pairs).

struct VanillaPair {
  std::string id;
  Image input;   // product on white
  Image target;  // original staged image
};

struct VanillaPairSet {
  std::vector<VanillaPair> pairs;
  std::vector<SkipRecord> skipped;
};

struct VanillaPairOptions {
  int frame_size = 64;
  SaliencyConfig saliency;
};

// Uses every staged entry. Entries with an empty saliency mask are skipped.
VanillaPairSet MakeVanillaPairs(const Catalog& catalog,
                                const SaliencyBackend& saliency,
                                const VanillaPairOptions& options = {});

struct VanillaConfig {
  int resolution = 64;
  int base_channels = 16;
  int batch_size = 4;
  double l1_weight = 100.0;
  float generator_lr = 1e-3f;
  float discriminator_lr = 2e-4f;
  uint64_t seed = kDefaultSeed;
};

inline constexpr char kVanillaKind[] = "prodstage.vanilla";

class VanillaModel {
 public:
  explicit VanillaModel(const VanillaConfig& config);
  VanillaModel(VanillaModel&&) = default;
  VanillaModel& operator=(VanillaModel&&) = default;

  // Raw generator output for a cutout at model resolution.
  Image Generate(const Image& cutout) const;

  const VanillaConfig& config() const { return config_; }
  int resolution() const { return config_.resolution; }

  nn::Checkpoint ToCheckpoint() const;
  static VanillaModel FromCheckpoint(const nn::Checkpoint& ckpt);
  void Save(const std::filesystem::path& path) const;
  static VanillaModel Load(const std::filesystem::path& path);

 private:
  friend class VanillaTrainer;

  std::vector<nn::ParamRef> AllParams() const;

  VanillaConfig config_;
  mutable nn::Sequential generator_;
  mutable nn::Sequential discriminator_;
};

struct VanillaStepLog {
  int step = 0;
  double l1 = 0.0;
  double adversarial = 0.0;
  double discriminator = 0.0;
};

struct VanillaTrainOptions {
  VanillaConfig config;
  std::vector<VanillaStepLog>* log = nullptr;
};

// Requires >= 8 pairs of identical square size and steps >= 1.
VanillaModel TrainVanilla(std::span<const VanillaPair> pairs, int steps,
                          uint64_t seed, VanillaTrainOptions options = {});

// Pixels that differ from pure white.
BinaryMask CutoutMask(const Image& cutout);

// out = cutout on the product mask, generated background elsewhere.
Image StageVanilla(const VanillaModel& model, const Image& cutout);
Image StageVanilla(const VanillaModel& model, const Image& cutout,
                   const BinaryMask& product_mask);

// ---------------------------------------------------------------------------
// Copy-paste staging.

// Maps a source pixel p to scale * p + (tx, ty).
struct AlignTransform {
  double scale = 1.0;
  double tx = 0.0;
  double ty = 0.0;
  Point2 Apply(Point2 p) const { return {scale * p.x + tx, scale * p.y + ty}; }
};

inline constexpr int kAlignMargin = 2;

// Uniform scale sqrt(area(dst) / area(src)), reduced if needed so the scaled
// source bounding box fits dst's canvas with kAlignMargin pixels each side,
// then the translation that moves the scaled src centroid onto dst's.
AlignTransform ComputeAlignTransform(const BinaryMask& src,
                                     const BinaryMask& dst);

// Resamples img onto a width x height canvas under t (bilinear, black
// outside the source).
Image WarpImage(const Image& img, const AlignTransform& t, int width,
                int height);
// Bilinear resampling of the mask, then >= 0.5.
BinaryMask WarpMask(const BinaryMask& mask, const AlignTransform& t, int width,
                    int height);

struct Donor {
  std::string id;
  Image image;
  BinaryMask mask;
  double distance = 0.0;
};

struct CompositeResult {
  Image image;
  std::string source_id;
  std::string donor_id;
  AlignTransform transform;
  BinaryMask pasted_mask;
  double distance = 0.0;
};

struct StagingOutput {
  std::vector<CompositeResult> results;
  std::vector<SkipRecord> skipped;
};

// One result per usable donor, donor order preserved. Donor images and the
// input must share dimensions.
StagingOutput CopyPasteStage(const Image& input_img,
                             const BinaryMask& input_mask,
                             std::span<const Donor> donors,
                             const Inpainter& inpainter);

struct StageFromCatalogOptions {
  int frame_size = 64;
  SaliencyConfig saliency;
};

// Segment, embed, retrieve the k nearest staged entries, stage against each.
// Throws kPoolEmpty when no staged donor is eligible.
StagingOutput StageFromCatalog(const Image& input_img,
                               const RetrievalIndex& index,
                               const Catalog& catalog, int k,
                               const Inpainter& inpainter,
                               const SaliencyBackend& saliency,
                               const FeatureExtractor& fx,
                               const StageFromCatalogOptions& options = {});

// JSON object on one line: source_id, donor_id, scale, tx, ty, distance.
std::string SidecarLine(const CompositeResult& result);

// Writes <prefix>_<i>.png per result and <prefix>.jsonl alongside.
void WriteStagingResults(const std::filesystem::path& dir,
                         const std::string& prefix,
                         std::span<const CompositeResult> results);

}  // namespace prodstage

#endif  // PRODSTAGE_STAGING_H_
