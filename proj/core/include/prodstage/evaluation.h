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

#ifndef PRODSTAGE_EVALUATION_H_
#define PRODSTAGE_EVALUATION_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prodstage/image.h"
#include "prodstage/metrics.h"
#include "prodstage/retrieval.h"

namespace prodstage {

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  int n = 0;
};

// Sample mean and unbiased covariance. Requires >= 2 equal-length samples.
GaussianStats GaussianFit(std::span<const std::vector<double>> features);

inline constexpr double kFidEpsilon = 1e-6;

// Frechet distance between two Gaussians.
double Fid(const GaussianStats& a, const GaussianStats& b);

// Raw (unnormalized) features, one row per image.
std::vector<std::vector<double>> ExtractFeatures(std::span<const Image> images,
                                                 const FeatureExtractor& fx);

struct FidVariant {
  std::string staging;   // table row, e.g. "vanilla staging"
  std::string training;  // table column, e.g. "baseline"
  double fid = 0.0;
};

struct FidReport {
  double fid = 0.0;
  int n_real = 0;
  int n_gen = 0;
  std::string extractor;
  std::vector<FidVariant> variants;
};

FidReport FidBetweenSets(std::span<const Image> real,
                         std::span<const Image> gen,
                         const FeatureExtractor& fx);

std::string FidReportJson(const FidReport& report);
// Rows and columns in order of first appearance; missing cells print "-".
std::string FormatFidTable(std::span<const FidVariant> variants);

std::string RetrievalMetricsJson(const RetrievalMetrics& metrics);
// Two rows (precision@k, recall@k), one column per k.
std::string FormatRetrievalTable(const RetrievalMetrics& metrics);

}  // namespace prodstage

#endif  // PRODSTAGE_EVALUATION_H_
