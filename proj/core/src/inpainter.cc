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
#include "prodstage/inpainter.h"

#include <cmath>
#include <string>

#include "json.hpp"
#include "nn/gan_step.h"
#include "prodstage/error.h"
#include "prodstage/nn/architectures.h"
#include "prodstage/nn/image_tensor.h"
#include "prodstage/nn/loss.h"
#include "prodstage/nn/optim.h"

namespace prodstage {

namespace {

using nlohmann::json;

json ConfigToJson(const InpainterConfig& c) {
  const LossWeights& w = c.weights;
  const FreeFormMaskParams& m = c.masks;
  return json{
      {"resolution", c.resolution},
      {"base_channels", c.base_channels},
      {"batch_size", c.batch_size},
      {"weights",
       {{"lambda_boundary", w.lambda_boundary},
        {"lambda_non_boundary", w.lambda_non_boundary},
        {"band_width_d", w.band_width_d},
        {"w_adv", w.w_adv},
        {"w_fm", w.w_fm},
        {"w_wbl", w.w_wbl}}},
      {"use_wbl", c.use_wbl},
      {"l1_weight", c.l1_weight},
      {"completion_adv_weight", c.completion_adv_weight},
      {"generator_lr", c.generator_lr},
      {"discriminator_lr", c.discriminator_lr},
      {"masks",
       {{"strokes", {m.strokes.lo, m.strokes.hi}},
        {"vertices_per_stroke",
         {m.vertices_per_stroke.lo, m.vertices_per_stroke.hi}},
        {"brush_width", {m.brush_width.lo, m.brush_width.hi}},
        {"min_segment", m.min_segment},
        {"max_segment", m.max_segment},
        {"max_turn", m.max_turn},
        {"min_area_fraction", m.min_area_fraction},
        {"max_area_fraction", m.max_area_fraction},
        {"max_attempts", m.max_attempts}}},
      {"canny", {{"sigma", c.canny.sigma}, {"low", c.canny.low}, {"high", c.canny.high}}},
      {"seed", c.seed},
  };
}

InpainterConfig ConfigFromJson(const json& j) {
  InpainterConfig c;
  c.resolution = j.at("resolution");
  c.base_channels = j.at("base_channels");
  c.batch_size = j.at("batch_size");
  const json& w = j.at("weights");
  c.weights.lambda_boundary = w.at("lambda_boundary");
  c.weights.lambda_non_boundary = w.at("lambda_non_boundary");
  c.weights.band_width_d = w.at("band_width_d");
  c.weights.w_adv = w.at("w_adv");
  c.weights.w_fm = w.at("w_fm");
  c.weights.w_wbl = w.at("w_wbl");
  c.use_wbl = j.at("use_wbl");
  c.l1_weight = j.at("l1_weight");
  c.completion_adv_weight = j.at("completion_adv_weight");
  c.generator_lr = j.at("generator_lr");
  c.discriminator_lr = j.at("discriminator_lr");
  const json& m = j.at("masks");
  c.masks.strokes = {m.at("strokes")[0], m.at("strokes")[1]};
  c.masks.vertices_per_stroke = {m.at("vertices_per_stroke")[0],
                                 m.at("vertices_per_stroke")[1]};
  c.masks.brush_width = {m.at("brush_width")[0], m.at("brush_width")[1]};
  c.masks.min_segment = m.at("min_segment");
  c.masks.max_segment = m.at("max_segment");
  c.masks.max_turn = m.at("max_turn");
  c.masks.min_area_fraction = m.at("min_area_fraction");
  c.masks.max_area_fraction = m.at("max_area_fraction");
  c.masks.max_attempts = m.at("max_attempts");
  const json& k = j.at("canny");
  c.canny = {k.at("sigma"), k.at("low"), k.at("high")};
  c.seed = j.at("seed");
  return c;
}

bool Finite(double v) { return std::isfinite(v); }

}  // namespace

Image Inpaint(const Inpainter& inpainter, const Image& img,
              const BinaryMask& hole) {
  if (img.width() != hole.width() || img.height() != hole.height()) {
    Fail(ErrorCode::kInvalidInput, "Inpaint: image/hole dimension mismatch");
  }
  if (hole.none()) return img;
  const Image generated = inpainter.Generate(img, hole);
  if (generated.width() != img.width() || generated.height() != img.height()) {
    Fail(ErrorCode::kInvalidInput, "Inpaint: generator changed the frame size");
  }
  Image out = Composite(img, generated, hole);
  out.set_id(img.id());
  return out;
}

InpainterModel::InpainterModel(const InpainterConfig& config)
    : config_(config) {
  config_.weights.Validate();
  if (config_.resolution < 32 || config_.resolution % 4 != 0) {
    Fail(ErrorCode::kInvalidInput,
         "inpainter resolution must be >= 32 and a multiple of 4");
  }
  Rng rng(DeriveSeed(config_.seed, 0));
  const int c = config_.base_channels;
  edge_generator_ = nn::MakeGenerator(3, 1, c, rng);
  completion_generator_ = nn::MakeGenerator(4, 3, c, rng);
  edge_discriminator_ = nn::MakePatchDiscriminator(2, c, rng);
  completion_discriminator_ = nn::MakePatchDiscriminator(3, c, rng);
}

void InpainterModel::CheckInput(const Image& img, const BinaryMask& hole) const {
  if (img.width() != hole.width() || img.height() != hole.height()) {
    Fail(ErrorCode::kInvalidInput, "inpaint: image/hole dimension mismatch");
  }
  if (img.width() != config_.resolution || img.height() != config_.resolution) {
    Fail(ErrorCode::kInvalidInput,
         "inpaint: model resolution is " + std::to_string(config_.resolution) +
             ", got " + std::to_string(img.width()) + "x" +
             std::to_string(img.height()));
  }
}

EdgeMap InpainterModel::PredictEdges(const Image& img,
                                     const BinaryMask& hole) const {
  CheckInput(img, hole);
  const int s = config_.resolution;
  nn::Tensor in(1, 3, s, s);
  const Plane<float> gray = ToGray(img);
  const EdgeMap edges = CannyEdges(gray, config_.canny);
  float* g = in.channel(0, 0);
  float* e = in.channel(0, 1);
  float* m = in.channel(0, 2);
  for (std::size_t i = 0; i < hole.size(); ++i) {
    const float keep = hole[i] ? 0.0f : 1.0f;
    g[i] = gray[i] * keep;
    e[i] = static_cast<float>(edges[i]) * keep;
    m[i] = 1.0f - keep;
  }
  const nn::Tensor pred = edge_generator_.Apply(in);
  EdgeMap merged(s, s);
  for (std::size_t i = 0; i < hole.size(); ++i) {
    merged[i] = hole[i] ? pred.data()[i] : edges[i];
  }
  return merged;
}

Image InpainterModel::Generate(const Image& img, const BinaryMask& hole) const {
  const EdgeMap edges = PredictEdges(img, hole);
  const int s = config_.resolution;
  nn::Tensor in(1, 4, s, s);
  nn::StoreImage(img, in, 0);
  for (int c = 0; c < 3; ++c) {
    float* ch = in.channel(0, c);
    for (std::size_t i = 0; i < hole.size(); ++i) {
      if (hole[i]) ch[i] = 0.0f;
    }
  }
  float* e = in.channel(0, 3);
  for (std::size_t i = 0; i < edges.size(); ++i) e[i] = static_cast<float>(edges[i]);
  return nn::TensorToImage(completion_generator_.Apply(in), 0);
}

std::vector<nn::ParamRef> InpainterModel::AllParams() const {
  std::vector<nn::ParamRef> out;
  edge_generator_.CollectParams("edge_generator.", out);
  completion_generator_.CollectParams("completion_generator.", out);
  edge_discriminator_.CollectParams("edge_discriminator.", out);
  completion_discriminator_.CollectParams("completion_discriminator.", out);
  return out;
}

nn::Checkpoint InpainterModel::ToCheckpoint() const {
  nn::Checkpoint ckpt;
  ckpt.kind = kInpainterKind;
  ckpt.config_json = ConfigToJson(config_).dump();
  nn::StoreParams(AllParams(), &ckpt);
  return ckpt;
}

InpainterModel InpainterModel::FromCheckpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.kind != kInpainterKind) {
    Fail(ErrorCode::kParse, "checkpoint kind is \"" + ckpt.kind +
                                "\", expected an inpainter");
  }
  InpainterConfig config;
  try {
    config = ConfigFromJson(json::parse(ckpt.config_json));
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad inpainter config: ") + e.what());
  }
  InpainterModel model(config);
  nn::RestoreParams(ckpt, model.AllParams());
  return model;
}

void InpainterModel::Save(const std::filesystem::path& path) const {
  ToCheckpoint().Save(path);
}

InpainterModel InpainterModel::Load(const std::filesystem::path& path) {
  return FromCheckpoint(nn::Checkpoint::Load(path));
}

class InpainterTrainer {
 public:
  InpainterTrainer(std::span<const Image> images, InpainterModel& model)
      : images_(images),
        model_(model),
        cfg_(model.config()),
        edge_gen_opt_(nn::Parameters(model.edge_generator_, ""),
                      {cfg_.generator_lr}),
        completion_gen_opt_(nn::Parameters(model.completion_generator_, ""),
                            {cfg_.generator_lr}),
        edge_disc_opt_(nn::Parameters(model.edge_discriminator_, ""),
                       {cfg_.discriminator_lr}),
        completion_disc_opt_(nn::Parameters(model.completion_discriminator_, ""),
                             {cfg_.discriminator_lr}),
        sampler_(DeriveSeed(cfg_.seed, 1)),
        mask_params_(cfg_.masks.ScaledFor(cfg_.resolution)) {
    for (const Image& img : images_) {
      gray_.push_back(ToGray(img));
      edges_.push_back(CannyEdges(gray_.back(), cfg_.canny));
    }
  }

  InpaintStepLog Step(int step) {
    const int b = cfg_.batch_size;
    const int s = cfg_.resolution;
    std::vector<int> picks(b);
    std::vector<BinaryMask> masks(b);
    for (int i = 0; i < b; ++i) {
      picks[i] = sampler_.UniformInt(0, static_cast<int>(images_.size()) - 1);
      FreeFormMaskParams p = mask_params_;
      p.seed = DeriveSeed(cfg_.seed, 1000 + static_cast<uint64_t>(step) * b + i);
      masks[i] = GenerateFreeformMask(p, s);
    }

    nn::Tensor rgb(b, 3, s, s);
    nn::Tensor gray(b, 1, s, s);
    nn::Tensor edges(b, 1, s, s);
    nn::Tensor hole(b, 1, s, s);
    nn::Tensor weight(b, 1, s, s);
    for (int i = 0; i < b; ++i) {
      nn::StoreImage(images_[picks[i]], rgb, i);
      nn::StorePlane(gray_[picks[i]], gray, i);
      nn::StorePlane(edges_[picks[i]], edges, i);
      nn::StoreMask(masks[i], hole, i);
      nn::StorePlane(WeightMap(masks[i], cfg_.weights), weight, i);
    }

    InpaintStepLog log;
    log.step = step;
    const nn::Tensor pred_edges = EdgeStage(gray, edges, hole, weight, &log);
    CompletionStage(rgb, edges, pred_edges, hole, &log);

    for (double v : {log.wbl, log.edge_l1, log.edge_adv, log.edge_fm,
                     log.edge_disc, log.completion_l1, log.completion_adv,
                     log.completion_disc}) {
      if (!Finite(v)) {
        Fail(ErrorCode::kTrainingDiverged,
             "inpainter training diverged at step " + std::to_string(step));
      }
    }
    return log;
  }

 private:
  nn::Tensor EdgeStage(const nn::Tensor& gray, const nn::Tensor& edges,
                       const nn::Tensor& hole, const nn::Tensor& weight,
                       InpaintStepLog* log) {
    const std::size_t n = gray.size();
    nn::Tensor masked_gray = gray;
    nn::Tensor masked_edges = edges;
    for (std::size_t i = 0; i < n; ++i) {
      const float keep = 1.0f - hole.data()[i];
      masked_gray.data()[i] *= keep;
      masked_edges.data()[i] *= keep;
    }
    const nn::Tensor* parts[] = {&masked_gray, &masked_edges, &hole};
    const nn::Tensor in = nn::ConcatChannels(parts);
    const nn::Tensor pred = model_.edge_generator_.Forward(in);

    const nn::Tensor* real_parts[] = {&gray, &edges};
    const nn::Tensor* fake_parts[] = {&gray, &pred};
    const nn::Tensor real = nn::ConcatChannels(real_parts);
    const nn::Tensor fake = nn::ConcatChannels(fake_parts);
    log->edge_disc = nn::UpdateDiscriminator(model_.edge_discriminator_,
                                             edge_disc_opt_, real, fake);

    const LossWeights& w = cfg_.weights;
    nn::AdversarialTerms adv = nn::GeneratorAdversarial(
        model_.edge_discriminator_, real, fake, w.w_adv, w.w_fm);
    log->edge_adv = adv.adversarial;
    log->edge_fm = adv.feature_matching;
    nn::Tensor grad = nn::SliceChannels(adv.grad_fake, 1, 1);

    // Reconstruction term: weighted (WBL) or plain L1.
    const double inv_n = 1.0 / static_cast<double>(n);
    double wbl = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(pred.data()[i]) - edges.data()[i];
      const double a = std::abs(d);
      const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
      wbl += weight.data()[i] * a;
      l1 += a;
      const double scale = cfg_.use_wbl ? weight.data()[i] : 1.0;
      grad.data()[i] += static_cast<float>(w.w_wbl * scale * sign * inv_n);
    }
    log->wbl = wbl * inv_n;
    log->edge_l1 = l1 * inv_n;

    edge_gen_opt_.ZeroGrad();
    model_.edge_generator_.Backward(grad);
    edge_gen_opt_.Step();
    return pred;
  }

  void CompletionStage(const nn::Tensor& rgb, const nn::Tensor& edges,
                       const nn::Tensor& pred_edges, const nn::Tensor& hole,
                       InpaintStepLog* log) {
    const int b = rgb.n();
    const std::size_t plane = rgb.plane_size();
    nn::Tensor masked = rgb;
    nn::Tensor merged_edges = edges;
    for (int i = 0; i < b; ++i) {
      const float* m = hole.channel(i, 0);
      for (int c = 0; c < 3; ++c) {
        float* ch = masked.channel(i, c);
        for (std::size_t p = 0; p < plane; ++p) ch[p] *= 1.0f - m[p];
      }
      float* e = merged_edges.channel(i, 0);
      const float* pe = pred_edges.channel(i, 0);
      for (std::size_t p = 0; p < plane; ++p) {
        if (m[p] > 0.5f) e[p] = pe[p];
      }
    }
    const nn::Tensor* parts[] = {&masked, &merged_edges};
    const nn::Tensor in = nn::ConcatChannels(parts);
    const nn::Tensor out = model_.completion_generator_.Forward(in);

    log->completion_disc = nn::UpdateDiscriminator(
        model_.completion_discriminator_, completion_disc_opt_, rgb, out);
    nn::AdversarialTerms adv = nn::GeneratorAdversarial(
        model_.completion_discriminator_, rgb, out, cfg_.completion_adv_weight,
        0.0);
    log->completion_adv = adv.adversarial;
    nn::LossAndGrad l1 = nn::MeanL1(out, rgb);
    log->completion_l1 = l1.loss;
    nn::Tensor grad = adv.grad_fake;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad.data()[i] += static_cast<float>(cfg_.l1_weight) * l1.grad.data()[i];
    }
    completion_gen_opt_.ZeroGrad();
    model_.completion_generator_.Backward(grad);
    completion_gen_opt_.Step();
  }

  std::span<const Image> images_;
  InpainterModel& model_;
  InpainterConfig cfg_;
  nn::Adam edge_gen_opt_;
  nn::Adam completion_gen_opt_;
  nn::Adam edge_disc_opt_;
  nn::Adam completion_disc_opt_;
  Rng sampler_;
  FreeFormMaskParams mask_params_;
  std::vector<Plane<float>> gray_;
  std::vector<EdgeMap> edges_;
};

InpainterModel TrainInpainter(std::span<const Image> images,
                              const LossWeights& weights, int steps,
                              uint64_t seed, bool use_wbl,
                              InpaintTrainOptions options) {
  if (images.size() < 8) {
    Fail(ErrorCode::kInvalidInput, "TrainInpainter: need at least 8 images");
  }
  if (steps < 1) Fail(ErrorCode::kInvalidInput, "TrainInpainter: steps must be >= 1");
  const int size = images[0].width();
  for (const Image& img : images) {
    if (img.width() != size || img.height() != size) {
      Fail(ErrorCode::kInvalidInput,
           "TrainInpainter: images must be square and equally sized");
    }
  }
  InpainterConfig config = options.config;
  config.resolution = size;
  config.weights = weights;
  config.seed = seed;
  config.use_wbl = use_wbl;
  InpainterModel model(config);
  InpainterTrainer trainer(images, model);
  for (int step = 0; step < steps; ++step) {
    InpaintStepLog log = trainer.Step(step);
    if (options.log != nullptr) options.log->push_back(log);
  }
  return model;
}

}  // namespace prodstage
