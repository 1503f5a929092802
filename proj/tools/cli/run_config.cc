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

#include "run_config.h"

#include <functional>
#include <map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "prodstage/error.h"

namespace prodstage::cli {

namespace {

namespace pt = boost::property_tree;

template <typename T>
std::function<void(const std::string&)> Into(T* field) {
  return [field](const std::string& text) {
    pt::ptree node;
    node.put_value(text);
    *field = node.get_value<T>();
  };
}

std::function<void(const std::string&)> IntoPath(std::filesystem::path* field) {
  return [field](const std::string& text) { *field = text; };
}

}  // namespace

RunConfig LoadRunConfig(const std::filesystem::path& path, RunConfig base) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    Fail(ErrorCode::kConfiguration, e.what());
  }
  RunConfig& c = base;
  std::string parallax_path(ParallaxPathName(c.parallax.path));
  const std::map<std::string, std::function<void(const std::string&)>> keys = {
      {"run.seed", Into(&c.seed)},
      {"run.jobs", Into(&c.jobs)},
      {"run.out", IntoPath(&c.out)},
      {"saliency.backend", Into(&c.saliency_backend)},
      {"saliency.model_path", IntoPath(&c.saliency_model)},
      {"saliency.threshold", Into(&c.saliency_threshold)},
      {"retrieval.extractor", Into(&c.extractor)},
      {"retrieval.model_path", IntoPath(&c.extractor_model)},
      {"retrieval.frame_size", Into(&c.frame_size)},
      {"retrieval.k", Into(&c.k)},
      {"inpaint.steps", Into(&c.inpaint_steps)},
      {"inpaint.resolution", Into(&c.inpaint_resolution)},
      {"inpaint.base_channels", Into(&c.inpaint_base_channels)},
      {"inpaint.batch_size", Into(&c.inpaint_batch_size)},
      {"inpaint.use_wbl", Into(&c.use_wbl)},
      {"inpaint.lambda_boundary", Into(&c.weights.lambda_boundary)},
      {"inpaint.lambda_non_boundary", Into(&c.weights.lambda_non_boundary)},
      {"inpaint.band_width_d", Into(&c.weights.band_width_d)},
      {"inpaint.w_adv", Into(&c.weights.w_adv)},
      {"inpaint.w_fm", Into(&c.weights.w_fm)},
      {"inpaint.w_wbl", Into(&c.weights.w_wbl)},
      {"vanilla.steps", Into(&c.vanilla_steps)},
      {"vanilla.l1_weight", Into(&c.vanilla_l1_weight)},
      {"parallax.frames", Into(&c.parallax.frames)},
      {"parallax.amplitude", Into(&c.parallax.amplitude)},
      {"parallax.bg_ratio", Into(&c.parallax.bg_ratio)},
      {"parallax.path", Into(&parallax_path)},
      {"parallax.overscan", Into(&c.parallax.overscan)},
  };
  for (const auto& [section, values] : tree) {
    for (const auto& [key, node] : values) {
      const std::string full = section + "." + key;
      const auto it = keys.find(full);
      if (it == keys.end()) {
        Fail(ErrorCode::kConfiguration, "unknown config key " + full);
      }
      try {
        it->second(node.data());
      } catch (const pt::ptree_error&) {
        Fail(ErrorCode::kConfiguration,
             "bad value for " + full + ": \"" + node.data() + "\"");
      }
    }
  }
  c.parallax.path = ParseParallaxPath(parallax_path);
  return c;
}

}  // namespace prodstage::cli
