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


#include <gtest/gtest.h>

#include <cmath>

#include "json.hpp"
#include "oracles.h"
#include "prodstage/evaluation.h"

namespace prodstage {
namespace {

using testing::BruteGaussianFit;
using testing::ErrorCodeOf;
using testing::Fid1D;
using testing::RandomImage;

GaussianStats Stats1D(double mu, double var) {
  GaussianStats s;
  s.mean = Eigen::VectorXd::Constant(1, mu);
  s.covariance = Eigen::MatrixXd::Constant(1, 1, var);
  s.n = 2;
  return s;
}

std::vector<std::vector<double>> RandomRows(Rng& rng, int n, int d) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& r : rows) {
    for (double& v : r) v = rng.Normal() * 2.0 + 1.0;
  }
  return rows;
}

TEST(GaussianFit, TwoOneDimensionalSamples) {
  const std::vector<std::vector<double>> rows = {{0.0}, {2.0}};
  const GaussianStats s = GaussianFit(rows);
  EXPECT_DOUBLE_EQ(s.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(s.covariance(0, 0), 2.0);
  EXPECT_EQ(s.n, 2);
}

TEST(GaussianFit, IdenticalSamplesGiveZeroCovariance) {
  const std::vector<std::vector<double>> rows(5, std::vector<double>{1.5, -2.0, 3.0});
  const GaussianStats s = GaussianFit(rows);
  EXPECT_EQ(s.covariance.norm(), 0.0);
}

TEST(GaussianFit, MatchesTwoPassOracleAndIsSymmetric) {
  Rng rng(71);
  for (int i = 0; i < 30; ++i) {
    const auto rows = RandomRows(rng, rng.UniformInt(2, 40), rng.UniformInt(1, 10));
    const GaussianStats s = GaussianFit(rows);
    const GaussianStats o = BruteGaussianFit(rows);
    EXPECT_LE((s.mean - o.mean).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((s.covariance - o.covariance).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GaussianFit, Preconditions) {
  const std::vector<std::vector<double>> one = {{1.0}};
  EXPECT_EQ(ErrorCodeOf([&] { GaussianFit(one); }), ErrorCode::kInvalidInput);
  const std::vector<std::vector<double>> ragged = {{1.0}, {1.0, 2.0}};
  EXPECT_EQ(ErrorCodeOf([&] { GaussianFit(ragged); }), ErrorCode::kInvalidInput);
}

TEST(Fid, IdenticalDistributionsGiveZero) {
  Rng rng(72);
  const GaussianStats s = GaussianFit(RandomRows(rng, 30, 8));
  EXPECT_NEAR(Fid(s, s), 0.0, 1e-6);
}

TEST(Fid, OneDimensionalClosedForm) {
  EXPECT_NEAR(Fid(Stats1D(0, 1), Stats1D(2, 9)), 8.0, 1e-6);
  Rng rng(73);
  for (int i = 0; i < 100; ++i) {
    const double m1 = rng.Uniform(-5, 5);
    const double m2 = rng.Uniform(-5, 5);
    const double v1 = rng.Uniform(0.01, 10);
    const double v2 = rng.Uniform(0.01, 10);
    EXPECT_NEAR(Fid(Stats1D(m1, v1), Stats1D(m2, v2)), Fid1D(m1, v1, m2, v2), 1e-6);
  }
}

TEST(Fid, SymmetricAndNonNegative) {
  Rng rng(74);
  for (int i = 0; i < 40; ++i) {
    const GaussianStats a = GaussianFit(RandomRows(rng, rng.UniformInt(3, 30), 6));
    const GaussianStats b = GaussianFit(RandomRows(rng, rng.UniformInt(3, 30), 6));
    EXPECT_NEAR(Fid(a, b), Fid(b, a), 1e-9);
    EXPECT_GE(Fid(a, b), 0.0);
  }
}

TEST(Fid, SingularCovariancesStayFinite) {
  // Fewer samples than dimensions: rank-deficient covariances.
  Rng rng(75);
  const GaussianStats a = GaussianFit(RandomRows(rng, 3, 12));
  const GaussianStats b = GaussianFit(RandomRows(rng, 3, 12));
  const double f = Fid(a, b);
  EXPECT_TRUE(std::isfinite(f));
  EXPECT_GE(f, 0.0);
}

TEST(Fid, DimensionMismatch) {
  Rng rng(76);
  const GaussianStats a = GaussianFit(RandomRows(rng, 5, 3));
  const GaussianStats b = GaussianFit(RandomRows(rng, 5, 4));
  EXPECT_EQ(ErrorCodeOf([&] { Fid(a, b); }), ErrorCode::kInvalidInput);
}

TEST(ExtractFeatures, EmptyBlackAndDeterministic) {
  const ToyHistogramExtractor fx;
  EXPECT_TRUE(ExtractFeatures({}, fx).empty());
  const std::vector<Image> black = {Uniform(5, 5, kBlack)};
  const auto rows = ExtractFeatures(black, fx);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (std::vector<double>{1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0}));
  Rng rng(77);
  std::vector<Image> imgs;
  for (int i = 0; i < 5; ++i) imgs.push_back(RandomImage(rng, 9, 9));
  EXPECT_EQ(ExtractFeatures(imgs, fx), ExtractFeatures(imgs, fx));
}

std::vector<Image> Tinted(Rng& rng, int n, int lo, int hi) {
  std::vector<Image> out;
  for (int i = 0; i < n; ++i) {
    Image img(16, 16);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        img.set(x, y, {static_cast<uint8_t>(rng.UniformInt(lo, hi)),
                       static_cast<uint8_t>(rng.UniformInt(lo, hi)),
                       static_cast<uint8_t>(rng.UniformInt(lo, hi))});
      }
    }
    out.push_back(img);
  }
  return out;
}

TEST(FidBetweenSets, SameSetDarkVsBrightAndSymmetry) {
  Rng rng(78);
  const std::vector<Image> dark = Tinted(rng, 12, 0, 120);
  const std::vector<Image> bright = Tinted(rng, 12, 130, 255);
  const ToyHistogramExtractor fx;
  const FidReport same = FidBetweenSets(dark, dark, fx);
  EXPECT_LE(same.fid, 1e-6);
  EXPECT_EQ(same.n_real, 12);
  EXPECT_EQ(same.n_gen, 12);
  EXPECT_EQ(same.extractor, "toy-histogram");
  const double apart = FidBetweenSets(dark, bright, fx).fid;
  EXPECT_GT(apart, same.fid);
  EXPECT_NEAR(FidBetweenSets(bright, dark, fx).fid, apart, 1e-9);
}

TEST(FidBetweenSets, NeedsTwoImagesEach) {
  Rng rng(79);
  const std::vector<Image> one = Tinted(rng, 1, 0, 255);
  const std::vector<Image> two = Tinted(rng, 2, 0, 255);
  EXPECT_EQ(ErrorCodeOf([&] { FidBetweenSets(one, two, ToyHistogramExtractor()); }),
            ErrorCode::kInvalidInput);
}

TEST(Reporting, FidTableReproducesPublishedLayout) {
  const std::vector<FidVariant> rows = {{"vanilla staging", "baseline", 127.77},
                                        {"vanilla staging", "with WBL", 122.22},
                                        {"copy-paste staging", "baseline", 38.44},
                                        {"copy-paste staging", "with WBL", 37.44}};
  const std::string table = FormatFidTable(rows);
  EXPECT_EQ(table,
            "                   | baseline | with WBL\n"
            "vanilla staging    |   127.77 |   122.22\n"
            "copy-paste staging |    38.44 |    37.44\n");
}

TEST(Reporting, FidTableMissingCell) {
  const std::vector<FidVariant> rows = {{"a", "x", 1.0}, {"b", "y", 2.0}};
  const std::string table = FormatFidTable(rows);
  EXPECT_NE(table.find("-"), std::string::npos);
}

TEST(Reporting, RetrievalTableAndJson) {
  RetrievalMetrics m;
  m.n_queries = 500;
  m.at_k = {{1, 0.468, 0.468}, {3, 0.409, 0.664}, {5, 0.374, 0.734}};
  const std::string table = FormatRetrievalTable(m);
  EXPECT_NE(table.find("0.468"), std::string::npos);
  EXPECT_NE(table.find("0.664"), std::string::npos);
  EXPECT_NE(table.find("0.734"), std::string::npos);
  EXPECT_NE(table.find("0.374"), std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(RetrievalMetricsJson(m));
  EXPECT_EQ(j.at("n_queries"), 500);
  EXPECT_EQ(j.at("at_k").size(), 3u);
}

TEST(Reporting, FidJsonFields) {
  FidReport r;
  r.fid = 1.25;
  r.n_real = 3;
  r.n_gen = 4;
  r.extractor = "toy-histogram";
  const nlohmann::json j = nlohmann::json::parse(FidReportJson(r));
  EXPECT_EQ(j.at("fid"), 1.25);
  EXPECT_EQ(j.at("n_real"), 3);
  EXPECT_EQ(j.at("extractor"), "toy-histogram");
}

}  // namespace
}  // namespace prodstage
