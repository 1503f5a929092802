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
#ifndef PRODSTAGE_NN_CHECKPOINT_H_
#define PRODSTAGE_NN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "prodstage/nn/layers.h"

namespace prodstage::nn {

inline constexpr uint32_t kCheckpointMajorVersion = 1;
inline constexpr uint32_t kCheckpointMinorVersion = 0;

struct NamedTensor {
  std::vector<int> shape;
  std::vector<float> values;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

// Versioned container: "STKCKPT" magic, u32 major, u32 minor, u32 kind
// length + kind, u32 config length + config (JSON text), u32 tensor count,
// then per tensor (sorted by name): name, u32 rank, u32 dims, float32 data.
// All integers and floats little endian. Readers accept any minor version of
// their major version.
struct Checkpoint {
  std::string kind;
  std::string config_json;
  std::map<std::string, NamedTensor> tensors;

  std::string Serialize() const;
  static Checkpoint Deserialize(std::string_view bytes);
  void Save(const std::filesystem::path& path) const;
  static Checkpoint Load(const std::filesystem::path& path);

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

void StoreParams(const std::vector<ParamRef>& params, Checkpoint* ckpt);
// Throws kParse when a parameter is missing or has the wrong shape.
void RestoreParams(const Checkpoint& ckpt, const std::vector<ParamRef>& params);

}  // namespace prodstage::nn

#endif  // PRODSTAGE_NN_CHECKPOINT_H_
