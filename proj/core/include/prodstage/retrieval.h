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
#ifndef PRODSTAGE_RETRIEVAL_H_
#define PRODSTAGE_RETRIEVAL_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "prodstage/catalog.h"
#include "prodstage/image.h"
#include "prodstage/metrics.h"
#include "prodstage/saliency.h"

namespace prodstage {

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string name() const = 0;
  virtual int output_dim() const = 0;
  // Unnormalized features; restricted to mask-true pixels when a mask is
  // given (for extractors that support it).
  virtual std::vector<double> RawFeatures(const Image& img,
                                          const BinaryMask* mask) const = 0;
};

// Per-channel 4-bin intensity histogram (bin = value / 64), each channel's
// bins expressed as a fraction of the counted pixels. D = 12.
class ToyHistogramExtractor final : public FeatureExtractor {
 public:
  static constexpr int kBins = 4;
  static constexpr int kDim = 3 * kBins;

  std::string name() const override { return "toy-histogram"; }
  int output_dim() const override { return kDim; }
  std::vector<double> RawFeatures(const Image& img,
                                  const BinaryMask* mask) const override;
};

// Pooled features of a pretrained Inception-V3 exported to ONNX.
class InceptionExtractor final : public FeatureExtractor {
 public:
  explicit InceptionExtractor(const std::filesystem::path& model_path,
                              int output_dim = 2048);
  ~InceptionExtractor() override;

  std::string name() const override { return "inception-v3"; }
  int output_dim() const override;
  std::vector<double> RawFeatures(const Image& img,
                                  const BinaryMask* mask) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct FeatureExtractorOptions {
  std::string name = "toy-histogram";
  std::filesystem::path model_path;
};

std::unique_ptr<FeatureExtractor> MakeFeatureExtractor(
    const FeatureExtractorOptions& options);

struct EmbeddingVector {
  std::vector<float> values;
  std::string source_id;

  friend bool operator==(const EmbeddingVector&,
                         const EmbeddingVector&) = default;
};

// L2-normalized features. Throws kDegenerateFeature on a zero vector.
EmbeddingVector Embed(const Image& img, const FeatureExtractor& fx,
                      const BinaryMask* mask = nullptr);

// 1 - cos(a, b), evaluated in double precision.
double CosineDistance(std::span<const float> a, std::span<const float> b);

struct IndexItem {
  std::string id;
  CategoryPath category_path;
  std::vector<float> values;

  friend bool operator==(const IndexItem&, const IndexItem&) = default;
};

struct RetrievalResult {
  std::string id;
  double distance = 0.0;
};

// Exhaustive cosine-distance index.
class RetrievalIndex {
 public:
  RetrievalIndex() = default;
  RetrievalIndex(std::string extractor_name, int dim);

  // Throws kIntegrity on duplicate ids, kInvalidInput on a wrong dimension.
  void Add(IndexItem item);

  const std::string& extractor_name() const { return extractor_name_; }
  int dim() const { return dim_; }
  std::size_t size() const { return items_.size(); }
  const std::vector<IndexItem>& items() const { return items_; }
  const IndexItem* Find(std::string_view id) const;

  // Sorted by distance ascending, ties by id ascending. Items whose id equals
  // query.source_id are excluded, as are items rejected by `eligible`.
  std::vector<RetrievalResult> TopK(
      const EmbeddingVector& query, int k,
      const std::function<bool(const IndexItem&)>& eligible = {}) const;

  // Binary layout (little endian): "STKIDX1", u32 name length + name, u32 D,
  // u32 count, then per item: u32 len + id, u32 len + category, D float32.
  void Save(const std::filesystem::path& path) const;
  std::string Serialize() const;
  static RetrievalIndex Load(const std::filesystem::path& path);
  static RetrievalIndex Deserialize(std::string_view bytes);

  friend bool operator==(const RetrievalIndex& a, const RetrievalIndex& b) {
    return a.extractor_name_ == b.extractor_name_ && a.dim_ == b.dim_ &&
           a.items_ == b.items_;
  }

 private:
  std::string extractor_name_;
  int dim_ = 0;
  std::vector<IndexItem> items_;
};

struct IndexBuildOptions {
  int frame_size = kDefaultFrameSize;
  SaliencyConfig saliency;
};

// One embedding per entry, computed on the segmented product. Throws
// kIo naming the entry id when an image cannot be read.
RetrievalIndex BuildIndex(const Catalog& catalog, const FeatureExtractor& fx,
                          const SaliencyBackend& saliency,
                          const IndexBuildOptions& options = {});

struct LabeledQuery {
  EmbeddingVector embedding;
  CategoryPath category_path;
};

// A retrieved item is relevant when its category path equals the query's.
RetrievalMetrics EvalRetrieval(const RetrievalIndex& index,
                               std::span<const LabeledQuery> queries,
                               std::span<const int> ks);

}  // namespace prodstage

#endif  // PRODSTAGE_RETRIEVAL_H_
