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

#include "prodstage/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "json.hpp"
#include "prodstage/error.h"

namespace prodstage {

namespace {

Eigen::MatrixXd SymmetricSqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    Fail(ErrorCode::kNumerical, "eigendecomposition failed");
  }
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() *
         eig.eigenvectors().transpose();
}

// trace((a b)^{1/2}) as the nuclear norm of a^{1/2} b^{1/2}; swapping the
// arguments only transposes the product.
bool TraceSqrtProduct(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      double* trace) {
  const Eigen::MatrixXd m = SymmetricSqrt(a) * SymmetricSqrt(b);
  if (!m.allFinite()) return false;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  *trace = svd.singularValues().sum();
  return std::isfinite(*trace);
}

void CheckStats(const GaussianStats& s, const char* which) {
  const Eigen::Index d = s.mean.size();
  if (s.covariance.rows() != d || s.covariance.cols() != d) {
    Fail(ErrorCode::kInvalidInput,
         std::string("Fid: covariance of ") + which + " is not D x D");
  }
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string FormatTable(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += " | ";
      const std::string& cell = row[c];
      const std::string pad(widths[c] - cell.size(), ' ');
      line += c == 0 ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

GaussianStats GaussianFit(std::span<const std::vector<double>> features) {
  if (features.size() < 2) {
    Fail(ErrorCode::kInvalidInput, "GaussianFit: need at least 2 samples");
  }
  const std::size_t d = features[0].size();
  const auto n = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (features[i].size() != d) {
      Fail(ErrorCode::kInvalidInput, "GaussianFit: ragged feature rows");
    }
    for (std::size_t j = 0; j < d; ++j) x(i, j) = features[i][j];
  }
  GaussianStats stats;
  stats.n = static_cast<int>(n);
  stats.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - stats.mean.transpose();
  stats.covariance =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  stats.covariance = 0.5 * (stats.covariance + stats.covariance.transpose());
  return stats;
}

double Fid(const GaussianStats& a, const GaussianStats& b) {
  CheckStats(a, "a");
  CheckStats(b, "b");
  if (a.mean.size() != b.mean.size()) {
    Fail(ErrorCode::kInvalidInput, "Fid: dimension mismatch (" +
                                       std::to_string(a.mean.size()) + " vs " +
                                       std::to_string(b.mean.size()) + ")");
  }
  const double mean_term = (a.mean - b.mean).squaredNorm();
  Eigen::MatrixXd sa = a.covariance;
  Eigen::MatrixXd sb = b.covariance;
  double trace_sqrt = 0.0;
  if (!TraceSqrtProduct(sa, sb, &trace_sqrt)) {
    const Eigen::MatrixXd eps =
        kFidEpsilon * Eigen::MatrixXd::Identity(sa.rows(), sa.cols());
    sa += eps;
    sb += eps;
    if (!TraceSqrtProduct(sa, sb, &trace_sqrt)) {
      Fail(ErrorCode::kNumerical,
           "Fid: matrix square root failed after regularization");
    }
  }
  double value = mean_term + sa.trace() + sb.trace() - 2.0 * trace_sqrt;
  if (!std::isfinite(value)) Fail(ErrorCode::kNumerical, "Fid: non-finite result");
  if (value < 0.0) {
    if (value < -kFidEpsilon) {
      Fail(ErrorCode::kNumerical, "Fid: negative residue " + Fixed(value, 9));
    }
    value = 0.0;
  }
  return value;
}

std::vector<std::vector<double>> ExtractFeatures(std::span<const Image> images,
                                                 const FeatureExtractor& fx) {
  std::vector<std::vector<double>> out;
  out.reserve(images.size());
  for (const Image& img : images) out.push_back(fx.RawFeatures(img, nullptr));
  return out;
}

FidReport FidBetweenSets(std::span<const Image> real,
                         std::span<const Image> gen,
                         const FeatureExtractor& fx) {
  if (real.size() < 2 || gen.size() < 2) {
    Fail(ErrorCode::kInvalidInput, "FidBetweenSets: need >= 2 images per set");
  }
  const auto real_features = ExtractFeatures(real, fx);
  const auto gen_features = ExtractFeatures(gen, fx);
  FidReport report;
  report.fid = Fid(GaussianFit(real_features), GaussianFit(gen_features));
  report.n_real = static_cast<int>(real.size());
  report.n_gen = static_cast<int>(gen.size());
  report.extractor = fx.name();
  return report;
}

std::string FidReportJson(const FidReport& report) {
  nlohmann::ordered_json j;
  j["fid"] = report.fid;
  j["n_real"] = report.n_real;
  j["n_gen"] = report.n_gen;
  j["extractor"] = report.extractor;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const FidVariant& v : report.variants) {
    rows.push_back(
        {{"staging", v.staging}, {"training", v.training}, {"fid", v.fid}});
  }
  j["variants"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string FormatFidTable(std::span<const FidVariant> variants) {
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  const auto remember = [](std::vector<std::string>& names,
                           const std::string& name) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(name);
    }
  };
  for (const FidVariant& v : variants) {
    remember(row_names, v.staging);
    remember(col_names, v.training);
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{""};
  header.insert(header.end(), col_names.begin(), col_names.end());
  rows.push_back(std::move(header));
  for (const std::string& r : row_names) {
    std::vector<std::string> row{r};
    for (const std::string& c : col_names) {
      std::string cell = "-";
      for (const FidVariant& v : variants) {
        if (v.staging == r && v.training == c) cell = Fixed(v.fid, 2);
      }
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return FormatTable(rows);
}

std::string RetrievalMetricsJson(const RetrievalMetrics& metrics) {
  nlohmann::ordered_json j;
  j["n_queries"] = metrics.n_queries;
  nlohmann::ordered_json at_k = nlohmann::ordered_json::array();
  for (const PrecisionRecallAtK& m : metrics.at_k) {
    at_k.push_back(
        {{"k", m.k}, {"precision", m.precision}, {"recall", m.recall}});
  }
  j["at_k"] = std::move(at_k);
  return j.dump(2) + "\n";
}

std::string FormatRetrievalTable(const RetrievalMetrics& metrics) {
  std::vector<std::vector<std::string>> rows(3);
  rows[0].push_back("");
  rows[1].push_back("precision@k");
  rows[2].push_back("recall@k");
  for (const PrecisionRecallAtK& m : metrics.at_k) {
    rows[0].push_back("@" + std::to_string(m.k));
    rows[1].push_back(Fixed(m.precision, 3));
    rows[2].push_back(Fixed(m.recall, 3));
  }
  return FormatTable(rows);
}

}  // namespace prodstage
