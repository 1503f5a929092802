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

#ifndef PRODSTAGE_HUMANEVAL_SERVER_H_
#define PRODSTAGE_HUMANEVAL_SERVER_H_

#include <memory>
#include <string>

#include "prodstage/error.h"
#include "prodstage/humaneval.h"

namespace prodstage {

// HTTP front end for a StudyStore.
//
//   POST /studies                       201 study manifest
//   GET  /studies/{id}                  200 study manifest
//   GET  /studies/{id}/next?judge={jid} 200 {"task": ... | null, "progress"}
//   POST /studies/{id}/votes            200 {"pair_id","votes","complete"}
//   GET  /studies/{id}/report           200 report
//   GET  /images/{ref}                  200 image/png
//
// Errors are {"error": code, "message": text} with 400 (bad input),
// 404 (unknown study, pair or image) or 409 (duplicate vote, complete pair,
// taken study id).
class HumanEvalServer {
 public:
  explicit HumanEvalServer(StudyStore& store);
  ~HumanEvalServer();
  HumanEvalServer(const HumanEvalServer&) = delete;
  HumanEvalServer& operator=(const HumanEvalServer&) = delete;

  // Returns the bound port, or -1 on failure. port 0 picks a free one.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int HttpStatusFor(ErrorCode code);

}  // namespace prodstage

#endif  // PRODSTAGE_HUMANEVAL_SERVER_H_
