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

#include "prodstage/staging.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "nn/gan_step.h"
#include "prodstage/error.h"
#include "prodstage/nn/architectures.h"
#include "prodstage/nn/image_tensor.h"
#include "prodstage/nn/loss.h"
#include "prodstage/nn/optim.h"
#include "prodstage/png_io.h"

namespace prodstage {

namespace {

using nlohmann::json;

json ConfigToJson(const VanillaConfig& c) {
  return json{{"resolution", c.resolution},
              {"base_channels", c.base_channels},
              {"batch_size", c.batch_size},
              {"l1_weight", c.l1_weight},
              {"generator_lr", c.generator_lr},
              {"discriminator_lr", c.discriminator_lr},
              {"seed", c.seed}};
}

VanillaConfig ConfigFromJson(const json& j) {
  VanillaConfig c;
  c.resolution = j.at("resolution");
  c.base_channels = j.at("base_channels");
  c.batch_size = j.at("batch_size");
  c.l1_weight = j.at("l1_weight");
  c.generator_lr = j.at("generator_lr");
  c.discriminator_lr = j.at("discriminator_lr");
  c.seed = j.at("seed");
  return c;
}

BinaryMask SegmentMask(const Image& img, const SaliencyBackend& saliency,
                       const SaliencyConfig& cfg) {
  return Binarize(DetectSaliency(img, saliency), cfg);
}

// Bilinear sample at continuous pixel-index coordinates; samples outside
// the image contribute zero.
template <typename Fetch>
double SampleBilinear(double u, double v, int w, int h, Fetch fetch) {
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const int x0 = static_cast<int>(fu);
  const int y0 = static_cast<int>(fv);
  const double ax = u - fu;
  const double ay = v - fv;
  double acc = 0.0;
  const int xs[2] = {x0, x0 + 1};
  const int ys[2] = {y0, y0 + 1};
  const double wx[2] = {1.0 - ax, ax};
  const double wy[2] = {1.0 - ay, ay};
  for (int j = 0; j < 2; ++j) {
    if (wy[j] == 0.0 || ys[j] < 0 || ys[j] >= h) continue;
    for (int i = 0; i < 2; ++i) {
      if (wx[i] == 0.0 || xs[i] < 0 || xs[i] >= w) continue;
      acc += wx[i] * wy[j] * fetch(xs[i], ys[j]);
    }
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vanilla staging.

VanillaPairSet MakeVanillaPairs(const Catalog& catalog,
                                const SaliencyBackend& saliency,
                                const VanillaPairOptions& options) {
  VanillaPairSet out;
  for (const CatalogEntry& entry : catalog.entries()) {
    if (!entry.staged) continue;
    Image original;
    try {
      original = ReadPng(catalog.ResolveImage(entry));
    } catch (const Error& e) {
      Fail(ErrorCode::kIo, "catalog entry " + entry.id + ": " + e.what());
    }
    Image target = Canonicalize(original, options.frame_size).first;
    const BinaryMask mask = SegmentMask(target, saliency, options.saliency);
    if (mask.none()) {
      out.skipped.push_back({entry.id, "empty saliency mask"});
      continue;
    }
    Image input = SegmentProduct(target, mask, kWhite);
    input.set_id(entry.id);
    target.set_id(entry.id);
    out.pairs.push_back({entry.id, std::move(input), std::move(target)});
  }
  return out;
}

VanillaModel::VanillaModel(const VanillaConfig& config) : config_(config) {
  if (config_.resolution < 16 || config_.resolution % 4 != 0) {
    Fail(ErrorCode::kInvalidInput,
         "vanilla resolution must be >= 16 and a multiple of 4");
  }
  if (!(config_.l1_weight >= 0.0)) {
    Fail(ErrorCode::kInvalidInput, "vanilla l1_weight must be >= 0");
  }
  Rng rng(DeriveSeed(config_.seed, 0));
  generator_ = nn::MakeGenerator(3, 3, config_.base_channels, rng);
  discriminator_ = nn::MakePatchDiscriminator(6, config_.base_channels, rng);
}

Image VanillaModel::Generate(const Image& cutout) const {
  if (cutout.width() != config_.resolution ||
      cutout.height() != config_.resolution) {
    Fail(ErrorCode::kInvalidInput,
         "vanilla model resolution is " + std::to_string(config_.resolution) +
             ", got " + std::to_string(cutout.width()) + "x" +
             std::to_string(cutout.height()));
  }
  const int s = config_.resolution;
  nn::Tensor in(1, 3, s, s);
  nn::StoreImage(cutout, in, 0);
  return nn::TensorToImage(generator_.Apply(in), 0);
}

std::vector<nn::ParamRef> VanillaModel::AllParams() const {
  std::vector<nn::ParamRef> out;
  generator_.CollectParams("generator.", out);
  discriminator_.CollectParams("discriminator.", out);
  return out;
}

nn::Checkpoint VanillaModel::ToCheckpoint() const {
  nn::Checkpoint ckpt;
  ckpt.kind = kVanillaKind;
  ckpt.config_json = ConfigToJson(config_).dump();
  nn::StoreParams(AllParams(), &ckpt);
  return ckpt;
}

VanillaModel VanillaModel::FromCheckpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.kind != kVanillaKind) {
    Fail(ErrorCode::kParse, "checkpoint kind is \"" + ckpt.kind +
                                "\", expected a vanilla staging model");
  }
  VanillaConfig config;
  try {
    config = ConfigFromJson(json::parse(ckpt.config_json));
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad vanilla config: ") + e.what());
  }
  VanillaModel model(config);
  nn::RestoreParams(ckpt, model.AllParams());
  return model;
}

void VanillaModel::Save(const std::filesystem::path& path) const {
  ToCheckpoint().Save(path);
}

VanillaModel VanillaModel::Load(const std::filesystem::path& path) {
  return FromCheckpoint(nn::Checkpoint::Load(path));
}

class VanillaTrainer {
 public:
  VanillaTrainer(std::span<const VanillaPair> pairs, VanillaModel& model)
      : pairs_(pairs),
        model_(model),
        cfg_(model.config()),
        gen_opt_(nn::Parameters(model.generator_, ""), {cfg_.generator_lr}),
        disc_opt_(nn::Parameters(model.discriminator_, ""),
                  {cfg_.discriminator_lr}),
        sampler_(DeriveSeed(cfg_.seed, 1)) {}

  VanillaStepLog Step(int step) {
    const int b = cfg_.batch_size;
    const int s = cfg_.resolution;
    nn::Tensor input(b, 3, s, s);
    nn::Tensor target(b, 3, s, s);
    for (int i = 0; i < b; ++i) {
      const int pick =
          sampler_.UniformInt(0, static_cast<int>(pairs_.size()) - 1);
      nn::StoreImage(pairs_[pick].input, input, i);
      nn::StoreImage(pairs_[pick].target, target, i);
    }
    const nn::Tensor generated = model_.generator_.Forward(input);
    const nn::Tensor* real_parts[] = {&input, &target};
    const nn::Tensor* fake_parts[] = {&input, &generated};
    const nn::Tensor real = nn::ConcatChannels(real_parts);
    const nn::Tensor fake = nn::ConcatChannels(fake_parts);

    VanillaStepLog log;
    log.step = step;
    log.discriminator =
        nn::UpdateDiscriminator(model_.discriminator_, disc_opt_, real, fake);
    nn::AdversarialTerms adv = nn::GeneratorAdversarial(
        model_.discriminator_, real, fake, 1.0, 0.0);
    log.adversarial = adv.adversarial;
    const nn::LossAndGrad l1 = nn::MeanL1(generated, target);
    log.l1 = l1.loss;

    nn::Tensor grad = nn::SliceChannels(adv.grad_fake, 3, 3);
    const float w = static_cast<float>(cfg_.l1_weight);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad.data()[i] += w * l1.grad.data()[i];
    }
    gen_opt_.ZeroGrad();
    model_.generator_.Backward(grad);
    gen_opt_.Step();

    if (!std::isfinite(log.l1) || !std::isfinite(log.adversarial) ||
        !std::isfinite(log.discriminator)) {
      Fail(ErrorCode::kTrainingDiverged,
           "vanilla training diverged at step " + std::to_string(step));
    }
    return log;
  }

 private:
  std::span<const VanillaPair> pairs_;
  VanillaModel& model_;
  VanillaConfig cfg_;
  nn::Adam gen_opt_;
  nn::Adam disc_opt_;
  Rng sampler_;
};

VanillaModel TrainVanilla(std::span<const VanillaPair> pairs, int steps,
                          uint64_t seed, VanillaTrainOptions options) {
  if (pairs.size() < 8) {
    Fail(ErrorCode::kInvalidInput, "TrainVanilla: need at least 8 pairs");
  }
  if (steps < 1) Fail(ErrorCode::kInvalidInput, "TrainVanilla: steps must be >= 1");
  const int size = pairs[0].input.width();
  for (const VanillaPair& p : pairs) {
    for (const Image* img : {&p.input, &p.target}) {
      if (img->width() != size || img->height() != size) {
        Fail(ErrorCode::kInvalidInput,
             "TrainVanilla: images must be square and equally sized");
      }
    }
  }
  VanillaConfig config = options.config;
  config.resolution = size;
  config.seed = seed;
  VanillaModel model(config);
  VanillaTrainer trainer(pairs, model);
  for (int step = 0; step < steps; ++step) {
    const VanillaStepLog log = trainer.Step(step);
    if (options.log != nullptr) options.log->push_back(log);
  }
  return model;
}

BinaryMask CutoutMask(const Image& cutout) {
  BinaryMask mask(cutout.width(), cutout.height(), false);
  for (int y = 0; y < cutout.height(); ++y) {
    for (int x = 0; x < cutout.width(); ++x) {
      mask.assign(x, y, cutout.at(x, y) != kWhite);
    }
  }
  return mask;
}

Image StageVanilla(const VanillaModel& model, const Image& cutout) {
  return StageVanilla(model, cutout, CutoutMask(cutout));
}

Image StageVanilla(const VanillaModel& model, const Image& cutout,
                   const BinaryMask& product_mask) {
  if (product_mask.width() != cutout.width() ||
      product_mask.height() != cutout.height()) {
    Fail(ErrorCode::kInvalidInput, "StageVanilla: mask/cutout size mismatch");
  }
  const Image generated = model.Generate(cutout);
  Image out = Composite(generated, cutout, product_mask);
  out.set_id(cutout.id());
  return out;
}

// ---------------------------------------------------------------------------
// Copy-paste staging.

AlignTransform ComputeAlignTransform(const BinaryMask& src,
                                     const BinaryMask& dst) {
  const std::size_t src_area = src.count();
  const std::size_t dst_area = dst.count();
  if (src_area == 0 || dst_area == 0) {
    Fail(ErrorCode::kEmptyMask, "ComputeAlignTransform: empty mask");
  }
  double scale = std::sqrt(static_cast<double>(dst_area) /
                           static_cast<double>(src_area));
  const BoundingBox box = MaskBounds(src);
  const double room_w = dst.width() - 2.0 * kAlignMargin;
  const double room_h = dst.height() - 2.0 * kAlignMargin;
  if (room_w > 0.0 && scale * box.width() > room_w) {
    scale = room_w / box.width();
  }
  if (room_h > 0.0 && scale * box.height() > room_h) {
    scale = room_h / box.height();
  }
  const Point2 cs = MaskCentroid(src);
  const Point2 cd = MaskCentroid(dst);
  return {scale, cd.x - scale * cs.x, cd.y - scale * cs.y};
}

Image WarpImage(const Image& img, const AlignTransform& t, int width,
                int height) {
  Image out(width, height, kBlack);
  const double inv = 1.0 / t.scale;
  for (int y = 0; y < height; ++y) {
    const double v = (y - t.ty) * inv;
    for (int x = 0; x < width; ++x) {
      const double u = (x - t.tx) * inv;
      uint8_t* dst = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double value =
            SampleBilinear(u, v, img.width(), img.height(),
                           [&](int sx, int sy) { return img.pixel(sx, sy)[c]; });
        dst[c] = static_cast<uint8_t>(
            std::clamp(std::floor(value + 0.5), 0.0, 255.0));
      }
    }
  }
  out.set_id(img.id());
  return out;
}

BinaryMask WarpMask(const BinaryMask& mask, const AlignTransform& t, int width,
                    int height) {
  BinaryMask out(width, height, false);
  const double inv = 1.0 / t.scale;
  for (int y = 0; y < height; ++y) {
    const double v = (y - t.ty) * inv;
    for (int x = 0; x < width; ++x) {
      const double u = (x - t.tx) * inv;
      const double value =
          SampleBilinear(u, v, mask.width(), mask.height(), [&](int sx, int sy) {
            return mask.test(sx, sy) ? 1.0 : 0.0;
          });
      out.assign(x, y, value >= 0.5);
    }
  }
  return out;
}

StagingOutput CopyPasteStage(const Image& input_img,
                             const BinaryMask& input_mask,
                             std::span<const Donor> donors,
                             const Inpainter& inpainter) {
  if (input_mask.width() != input_img.width() ||
      input_mask.height() != input_img.height()) {
    Fail(ErrorCode::kInvalidInput, "CopyPasteStage: input mask size mismatch");
  }
  if (input_mask.none()) {
    Fail(ErrorCode::kEmptyMask, "CopyPasteStage: empty input mask");
  }
  if (donors.empty()) {
    Fail(ErrorCode::kInvalidInput, "CopyPasteStage: no donors");
  }
  const std::string source_id = input_img.id().value_or("");
  StagingOutput out;
  for (const Donor& donor : donors) {
    if (donor.image.width() != input_img.width() ||
        donor.image.height() != input_img.height() ||
        donor.mask.width() != input_img.width() ||
        donor.mask.height() != input_img.height()) {
      Fail(ErrorCode::kInvalidInput,
           "CopyPasteStage: donor " + donor.id + " is not on the input frame");
    }
    if (donor.mask.none()) {
      out.skipped.push_back({donor.id, "empty donor mask"});
      continue;
    }
    const Image plate = Inpaint(inpainter, donor.image, donor.mask);
    const AlignTransform t = ComputeAlignTransform(input_mask, donor.mask);
    const int w = plate.width();
    const int h = plate.height();
    const Image product = WarpImage(input_img, t, w, h);
    BinaryMask pasted = WarpMask(input_mask, t, w, h);

    CompositeResult result;
    result.image = Composite(plate, product, pasted);
    result.image.set_id(source_id + "@" + donor.id);
    result.source_id = source_id;
    result.donor_id = donor.id;
    result.transform = t;
    result.pasted_mask = std::move(pasted);
    result.distance = donor.distance;
    out.results.push_back(std::move(result));
  }
  return out;
}

StagingOutput StageFromCatalog(const Image& input_img,
                               const RetrievalIndex& index,
                               const Catalog& catalog, int k,
                               const Inpainter& inpainter,
                               const SaliencyBackend& saliency,
                               const FeatureExtractor& fx,
                               const StageFromCatalogOptions& options) {
  if (k < 1) Fail(ErrorCode::kInvalidInput, "StageFromCatalog: k must be >= 1");
  if (index.extractor_name() != fx.name()) {
    Fail(ErrorCode::kInvalidInput, "index was built with " +
                                       index.extractor_name() + ", not " +
                                       fx.name());
  }
  Image input = Canonicalize(input_img, options.frame_size).first;
  input.set_id(input_img.id());
  const BinaryMask input_mask = SegmentMask(input, saliency, options.saliency);
  if (input_mask.none()) {
    Fail(ErrorCode::kEmptyMask, "StageFromCatalog: no product found in input");
  }
  const EmbeddingVector query = Embed(input, fx, &input_mask);

  const auto eligible = [&](const IndexItem& item) {
    const CatalogEntry* entry = catalog.Find(item.id);
    return entry != nullptr && entry->staged;
  };
  const std::vector<RetrievalResult> hits = index.TopK(query, k, eligible);
  if (hits.empty()) {
    Fail(ErrorCode::kPoolEmpty, "no staged donor available for retrieval");
  }

  std::vector<Donor> donors;
  donors.reserve(hits.size());
  for (const RetrievalResult& hit : hits) {
    const CatalogEntry* entry = catalog.Find(hit.id);
    Image raw;
    try {
      raw = ReadPng(catalog.ResolveImage(*entry));
    } catch (const Error& e) {
      Fail(ErrorCode::kIo, "catalog entry " + entry->id + ": " + e.what());
    }
    Donor donor;
    donor.id = hit.id;
    donor.image = Canonicalize(raw, options.frame_size).first;
    donor.image.set_id(hit.id);
    donor.mask = SegmentMask(donor.image, saliency, options.saliency);
    donor.distance = hit.distance;
    donors.push_back(std::move(donor));
  }
  return CopyPasteStage(input, input_mask, donors, inpainter);
}

std::string SidecarLine(const CompositeResult& result) {
  nlohmann::ordered_json j;
  j["source_id"] = result.source_id;
  j["donor_id"] = result.donor_id;
  j["scale"] = result.transform.scale;
  j["tx"] = result.transform.tx;
  j["ty"] = result.transform.ty;
  j["distance"] = result.distance;
  return j.dump();
}

void WriteStagingResults(const std::filesystem::path& dir,
                         const std::string& prefix,
                         std::span<const CompositeResult> results) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
  std::ofstream sidecar(dir / (prefix + ".jsonl"), std::ios::binary);
  if (!sidecar) Fail(ErrorCode::kIo, "cannot write sidecar in " + dir.string());
  for (std::size_t i = 0; i < results.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "_%02zu.png", i);
    WritePng(dir / (prefix + name), results[i].image);
    sidecar << SidecarLine(results[i]) << '\n';
  }
  if (!sidecar) Fail(ErrorCode::kIo, "failed writing sidecar in " + dir.string());
}

}  // namespace prodstage
