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

#ifndef PRODSTAGE_ERROR_H_
#define PRODSTAGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace prodstage {

enum class ErrorCode {
  kInvalidInput,
  kEmptyMask,
  kParse,
  kIntegrity,
  kIo,
  kBackendUnavailable,
  kDegenerateFeature,
  kGeneration,
  kTrainingDiverged,
  kNumerical,
  kNotFound,
  kConflict,
  kPoolEmpty,
  kConfiguration,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library is an Error carrying a machine-readable
// code; callers that care branch on code(), everybody else reads what().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace prodstage

#endif  // PRODSTAGE_ERROR_H_
