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

#include "prodstage/error.h"

namespace prodstage {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid_input";
    case ErrorCode::kEmptyMask:
      return "empty_mask";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kIntegrity:
      return "integrity";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kBackendUnavailable:
      return "backend_unavailable";
    case ErrorCode::kDegenerateFeature:
      return "degenerate_feature";
    case ErrorCode::kGeneration:
      return "generation";
    case ErrorCode::kTrainingDiverged:
      return "training_diverged";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kPoolEmpty:
      return "pool_empty";
    case ErrorCode::kConfiguration:
      return "configuration";
  }
  return "unknown";
}

}  // namespace prodstage
