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

#ifndef PRODSTAGE_TESTS_SUPPORT_ORACLES_H_
#define PRODSTAGE_TESTS_SUPPORT_ORACLES_H_

// Independent reference implementations used to check the library. They
// favour the most literal formulation over speed.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prodstage/error.h"
#include "prodstage/evaluation.h"
#include "prodstage/humaneval.h"
#include "prodstage/image.h"
#include "prodstage/inpainter.h"
#include "prodstage/retrieval.h"
#include "prodstage/rng.h"

namespace prodstage::testing {

// Loss ---------------------------------------------------------------------

// sum over (x, y) of w * |gt - pred|, divided by the pixel count, using
// long double accumulation in row-major (x, y) indexing.
double BruteWbl(const EdgeMap& gt, const EdgeMap& pred, const WeightedMap& w);

// A pixel is in the band when some in-image pixel of the opposite value is
// within Chebyshev distance d.
BinaryMask BruteBand(const BinaryMask& mask, int d);
WeightedMap BruteWeightMap(const BinaryMask& mask, int d, double on,
                           double off);

// Statistics ---------------------------------------------------------------

// (mu1 - mu2)^2 + (sigma1 - sigma2)^2.
double Fid1D(double mu1, double var1, double mu2, double var2);

// Two explicit passes: mean, then unbiased covariance.
GaussianStats BruteGaussianFit(const std::vector<std::vector<double>>& rows);

// Geometry -----------------------------------------------------------------

Point2 BruteCentroid(const BinaryMask& mask);

// Returns the stored plate, whatever the input.
class StoredPlateInpainter final : public Inpainter {
 public:
  explicit StoredPlateInpainter(Image plate) : plate_(std::move(plate)) {}
  Image Generate(const Image&, const BinaryMask&) const override {
    return plate_;
  }

 private:
  Image plate_;
};

// Per pixel: input pixel on the input mask, plate pixel on the donor hole,
// donor pixel elsewhere. Only valid for an identity alignment.
Image BruteCopyPaste(const Image& input, const BinaryMask& input_mask,
                     const Image& donor, const BinaryMask& donor_mask,
                     const Image& plate);

// Retrieval ----------------------------------------------------------------

// Ids of the k nearest items by cosine distance computed from scratch in
// long double; ties by id.
std::vector<std::string> BruteNearest(
    const std::vector<IndexItem>& items, const std::vector<float>& query,
    const std::string& exclude_id, int k,
    const std::function<bool(const IndexItem&)>& eligible = {});

// Random fixtures ----------------------------------------------------------

Image RandomImage(Rng& rng, int width, int height);
// Independent per-pixel coin flips.
BinaryMask RandomNoiseMask(Rng& rng, int width, int height, double density);
// Union of 1-3 random axis-aligned rectangles and discs; never empty.
BinaryMask RandomBlobMask(Rng& rng, int width, int height);
EdgeMap RandomEdgeMap(Rng& rng, int width, int height, bool binary);

// Files --------------------------------------------------------------------

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Runs f and returns the code of the prodstage::Error it throws, or nullopt.
template <typename F>
std::optional<ErrorCode> ErrorCodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::string ReadBytes(const std::filesystem::path& path);

// Relative path -> bytes for every regular file under dir.
std::vector<std::pair<std::string, std::string>> SnapshotTree(
    const std::filesystem::path& dir);

}  // namespace prodstage::testing

#endif  // PRODSTAGE_TESTS_SUPPORT_ORACLES_H_
