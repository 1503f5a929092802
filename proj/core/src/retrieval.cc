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
#include "prodstage/retrieval.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "prodstage/error.h"
#include "prodstage/png_io.h"

namespace prodstage {

namespace {

constexpr std::string_view kIndexMagic = "STKIDX1";

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutString(std::string& out, std::string_view s) {
  PutU32(out, static_cast<uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view Take(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      Fail(ErrorCode::kParse, "index file truncated");
    }
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  uint32_t U32() {
    const std::string_view b = Take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<uint8_t>(b[i])) << (8 * i);
    }
    return v;
  }
  std::string String() {
    const uint32_t n = U32();
    return std::string(Take(n));
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> ToyHistogramExtractor::RawFeatures(
    const Image& img, const BinaryMask* mask) const {
  if (mask != nullptr &&
      (mask->width() != img.width() || mask->height() != img.height())) {
    Fail(ErrorCode::kInvalidInput, "toy-histogram: mask dimension mismatch");
  }
  std::vector<double> counts(kDim, 0.0);
  std::size_t n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (mask != nullptr && !mask->test(x, y)) continue;
      const uint8_t* p = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) counts[c * kBins + p[c] / 64] += 1.0;
      ++n;
    }
  }
  if (n > 0) {
    for (double& v : counts) v /= static_cast<double>(n);
  }
  return counts;
}

std::unique_ptr<FeatureExtractor> MakeFeatureExtractor(
    const FeatureExtractorOptions& options) {
  if (options.name == "toy-histogram") {
    return std::make_unique<ToyHistogramExtractor>();
  }
  if (options.name == "inception-v3") {
    return std::make_unique<InceptionExtractor>(options.model_path);
  }
  Fail(ErrorCode::kConfiguration,
       "unknown feature extractor \"" + options.name + "\"");
}

EmbeddingVector Embed(const Image& img, const FeatureExtractor& fx,
                      const BinaryMask* mask) {
  const std::vector<double> raw = fx.RawFeatures(img, mask);
  double norm2 = 0.0;
  for (double v : raw) norm2 += v * v;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    Fail(ErrorCode::kDegenerateFeature,
         "feature vector is zero" +
             (img.id() ? " for \"" + *img.id() + "\"" : std::string()));
  }
  const double inv = 1.0 / std::sqrt(norm2);
  EmbeddingVector out;
  out.values.reserve(raw.size());
  for (double v : raw) out.values.push_back(static_cast<float>(v * inv));
  out.source_id = img.id().value_or("");
  return out;
}

double CosineDistance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kInvalidInput, "CosineDistance: dimension mismatch");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / std::sqrt(na * nb);
}

RetrievalIndex::RetrievalIndex(std::string extractor_name, int dim)
    : extractor_name_(std::move(extractor_name)), dim_(dim) {}

void RetrievalIndex::Add(IndexItem item) {
  if (static_cast<int>(item.values.size()) != dim_) {
    Fail(ErrorCode::kInvalidInput, "index item \"" + item.id +
                                       "\" has dimension " +
                                       std::to_string(item.values.size()));
  }
  if (Find(item.id) != nullptr) {
    Fail(ErrorCode::kIntegrity, "duplicate index id \"" + item.id + "\"");
  }
  items_.push_back(std::move(item));
}

const IndexItem* RetrievalIndex::Find(std::string_view id) const {
  for (const IndexItem& item : items_) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

std::vector<RetrievalResult> RetrievalIndex::TopK(
    const EmbeddingVector& query, int k,
    const std::function<bool(const IndexItem&)>& eligible) const {
  if (k < 1) Fail(ErrorCode::kInvalidInput, "TopK: k must be >= 1");
  std::vector<RetrievalResult> all;
  all.reserve(items_.size());
  for (const IndexItem& item : items_) {
    if (!query.source_id.empty() && item.id == query.source_id) continue;
    if (eligible && !eligible(item)) continue;
    all.push_back({item.id, CosineDistance(query.values, item.values)});
  }
  const auto by_distance = [](const RetrievalResult& a,
                              const RetrievalResult& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  };
  const std::size_t n = std::min(all.size(), static_cast<std::size_t>(k));
  std::partial_sort(all.begin(), all.begin() + n, all.end(), by_distance);
  all.resize(n);
  return all;
}

std::string RetrievalIndex::Serialize() const {
  std::string out(kIndexMagic);
  PutString(out, extractor_name_);
  PutU32(out, static_cast<uint32_t>(dim_));
  PutU32(out, static_cast<uint32_t>(items_.size()));
  for (const IndexItem& item : items_) {
    PutString(out, item.id);
    PutString(out, FormatCategory(item.category_path));
    for (float v : item.values) PutU32(out, std::bit_cast<uint32_t>(v));
  }
  return out;
}

RetrievalIndex RetrievalIndex::Deserialize(std::string_view bytes) {
  Reader in(bytes);
  if (in.Take(kIndexMagic.size()) != kIndexMagic) {
    Fail(ErrorCode::kParse, "not an index file (bad magic)");
  }
  std::string name = in.String();
  const uint32_t dim = in.U32();
  const uint32_t count = in.U32();
  RetrievalIndex index(std::move(name), static_cast<int>(dim));
  for (uint32_t i = 0; i < count; ++i) {
    IndexItem item;
    item.id = in.String();
    item.category_path = ParseCategory(in.String());
    item.values.resize(dim);
    for (uint32_t d = 0; d < dim; ++d) {
      item.values[d] = std::bit_cast<float>(in.U32());
    }
    index.Add(std::move(item));
  }
  if (!in.done()) Fail(ErrorCode::kParse, "trailing bytes in index file");
  return index;
}

void RetrievalIndex::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write index " + path.string());
  const std::string bytes = Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

RetrievalIndex RetrievalIndex::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open index " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Deserialize(buffer.str());
}

RetrievalIndex BuildIndex(const Catalog& catalog, const FeatureExtractor& fx,
                          const SaliencyBackend& saliency,
                          const IndexBuildOptions& options) {
  RetrievalIndex index(fx.name(), fx.output_dim());
  for (const CatalogEntry& entry : catalog.entries()) {
    Image raw;
    try {
      raw = ReadPng(catalog.ResolveImage(entry));
    } catch (const Error& e) {
      Fail(ErrorCode::kIo, "cannot ingest \"" + entry.id + "\": " + e.what());
    }
    Image img = Canonicalize(raw, options.frame_size).first;
    img.set_id(entry.id);
    const BinaryMask mask =
        Binarize(DetectSaliency(img, saliency), options.saliency);
    // Nothing salient: describe the whole frame instead.
    EmbeddingVector e = Embed(img, fx, mask.none() ? nullptr : &mask);
    index.Add({entry.id, entry.category_path, std::move(e.values)});
  }
  return index;
}

RetrievalMetrics EvalRetrieval(const RetrievalIndex& index,
                               std::span<const LabeledQuery> queries,
                               std::span<const int> ks) {
  if (queries.empty()) {
    Fail(ErrorCode::kInvalidInput, "EvalRetrieval: empty query set");
  }
  if (ks.empty()) Fail(ErrorCode::kInvalidInput, "EvalRetrieval: no k values");
  int max_k = 0;
  for (int k : ks) {
    if (k < 1) Fail(ErrorCode::kInvalidInput, "EvalRetrieval: k must be >= 1");
    max_k = std::max(max_k, k);
  }
  std::vector<double> precision_sum(ks.size(), 0.0);
  std::vector<std::size_t> hits(ks.size(), 0);
  for (const LabeledQuery& q : queries) {
    const std::vector<RetrievalResult> ranked = index.TopK(q.embedding, max_k);
    std::vector<int> relevant_prefix(ranked.size() + 1, 0);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const IndexItem* item = index.Find(ranked[i].id);
      relevant_prefix[i + 1] =
          relevant_prefix[i] + (item->category_path == q.category_path ? 1 : 0);
    }
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const std::size_t n = std::min(ranked.size(), static_cast<std::size_t>(ks[j]));
      const int rel = relevant_prefix[n];
      precision_sum[j] += static_cast<double>(rel) / ks[j];
      if (rel > 0) ++hits[j];
    }
  }
  RetrievalMetrics metrics;
  metrics.n_queries = queries.size();
  const double nq = static_cast<double>(queries.size());
  for (std::size_t j = 0; j < ks.size(); ++j) {
    metrics.at_k.push_back({ks[j], precision_sum[j] / nq,
                            static_cast<double>(hits[j]) / nq});
  }
  return metrics;
}

}  // namespace prodstage
