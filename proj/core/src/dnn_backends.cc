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
// Pretrained-network backends. Compiled against OpenCV DNN when available;
// otherwise every constructor reports the backend as unavailable.

#include <cmath>
#include <string>

#include "prodstage/error.h"
#include "prodstage/retrieval.h"
#include "prodstage/saliency.h"

#ifdef PRODSTAGE_HAVE_OPENCV_DNN
#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>
#endif

namespace prodstage {

namespace {

[[noreturn]] void Unavailable(const std::string& backend,
                              const std::filesystem::path& path,
                              const std::string& why) {
  Fail(ErrorCode::kBackendUnavailable,
       backend + " backend unavailable (" + path.string() + "): " + why);
}

#ifdef PRODSTAGE_HAVE_OPENCV_DNN
cv::Mat ToMat(const Image& img) {
  cv::Mat rgb(img.height(), img.width(), CV_8UC3,
              const_cast<uint8_t*>(img.data().data()));
  return rgb.clone();
}

cv::dnn::Net LoadNet(const std::string& backend,
                     const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    Unavailable(backend, path, "model file missing");
  }
  try {
    cv::dnn::Net net = cv::dnn::readNet(path.string());
    if (net.empty()) Unavailable(backend, path, "model could not be parsed");
    net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
    net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
    return net;
  } catch (const cv::Exception& e) {
    Unavailable(backend, path, e.what());
  }
}

// ImageNet normalization, NCHW float blob.
cv::Mat Blob(const Image& img, int size) {
  cv::Mat f;
  ToMat(img).convertTo(f, CV_32FC3, 1.0 / 255.0);
  cv::Mat resized;
  cv::resize(f, resized, cv::Size(size, size), 0, 0, cv::INTER_LINEAR);
  cv::subtract(resized, cv::Scalar(0.485, 0.456, 0.406), resized);
  cv::divide(resized, cv::Scalar(0.229, 0.224, 0.225), resized);
  return cv::dnn::blobFromImage(resized);
}
#endif

}  // namespace

struct U2NetBackend::Impl {
  int input_size = 320;
#ifdef PRODSTAGE_HAVE_OPENCV_DNN
  mutable cv::dnn::Net net;
#endif
};

U2NetBackend::U2NetBackend(const std::filesystem::path& model_path,
                           int input_size)
    : impl_(std::make_unique<Impl>()) {
  impl_->input_size = input_size;
#ifdef PRODSTAGE_HAVE_OPENCV_DNN
  impl_->net = LoadNet("u2net", model_path);
#else
  Unavailable("u2net", model_path, "built without OpenCV DNN");
#endif
}

U2NetBackend::~U2NetBackend() = default;

SaliencyMap U2NetBackend::Detect(const Image& img) const {
#ifdef PRODSTAGE_HAVE_OPENCV_DNN
  impl_->net.setInput(Blob(img, impl_->input_size));
  // First output is the fused side output d0, already passed through sigmoid.
  cv::Mat out = impl_->net.forward();
  const int s = impl_->input_size;
  cv::Mat pred(s, s, CV_32F, out.ptr<float>());
  double lo = 0.0;
  double hi = 0.0;
  cv::minMaxLoc(pred, &lo, &hi);
  cv::Mat norm = pred.clone();
  if (hi > lo) norm = (pred - lo) / (hi - lo);
  cv::Mat full;
  cv::resize(norm, full, cv::Size(img.width(), img.height()), 0, 0,
             cv::INTER_LINEAR);
  SaliencyMap map(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      map(x, y) = std::clamp(full.at<float>(y, x), 0.0f, 1.0f);
    }
  }
  return map;
#else
  (void)img;
  Fail(ErrorCode::kBackendUnavailable, "u2net backend unavailable");
#endif
}

struct InceptionExtractor::Impl {
  int output_dim = 0;
#ifdef PRODSTAGE_HAVE_OPENCV_DNN
  mutable cv::dnn::Net net;
#endif
};

InceptionExtractor::InceptionExtractor(const std::filesystem::path& model_path,
                                       int output_dim)
    : impl_(std::make_unique<Impl>()) {
  impl_->output_dim = output_dim;
#ifdef PRODSTAGE_HAVE_OPENCV_DNN
  impl_->net = LoadNet("inception-v3", model_path);
#else
  Unavailable("inception-v3", model_path, "built without OpenCV DNN");
#endif
}

InceptionExtractor::~InceptionExtractor() = default;

int InceptionExtractor::output_dim() const { return impl_->output_dim; }

std::vector<double> InceptionExtractor::RawFeatures(
    const Image& img, const BinaryMask* mask) const {
#ifdef PRODSTAGE_HAVE_OPENCV_DNN
  const Image input = mask != nullptr ? SegmentProduct(img, *mask) : img;
  impl_->net.setInput(Blob(input, 299));
  cv::Mat out = impl_->net.forward();
  const float* p = out.ptr<float>();
  const std::size_t n = out.total();
  if (static_cast<int>(n) != impl_->output_dim) {
    Fail(ErrorCode::kBackendUnavailable,
         "inception-v3 output has " + std::to_string(n) + " values, expected " +
             std::to_string(impl_->output_dim));
  }
  return std::vector<double>(p, p + n);
#else
  (void)img;
  (void)mask;
  Fail(ErrorCode::kBackendUnavailable, "inception-v3 backend unavailable");
#endif
}

}  // namespace prodstage
