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

#include "prodstage/humaneval_server.h"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace prodstage {

namespace {

using nlohmann::json;

void SendError(httplib::Response& res, ErrorCode code, const std::string& msg) {
  res.status = HttpStatusFor(code);
  json j{{"error", std::string(ErrorCodeName(code))}, {"message", msg}};
  res.set_content(j.dump(), "application/json");
}

template <typename Fn>
httplib::Server::Handler Guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      SendError(res, e.code(), e.what());
    } catch (const json::exception& e) {
      SendError(res, ErrorCode::kInvalidInput, e.what());
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(json{{"error", "internal"}, {"message", e.what()}}.dump(),
                      "application/json");
    }
  };
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kInvalidInput:
    case ErrorCode::kParse:
    case ErrorCode::kIo:
      return 400;
    default:
      return 500;
  }
}

struct HumanEvalServer::Impl {
  explicit Impl(StudyStore& s) : store(s) { Routes(); }

  void Routes() {
    server.Post("/studies", Guarded([this](const httplib::Request& req,
                                           httplib::Response& res) {
      const Study study = store.CreateStudy(ParseStudySpecJson(req.body));
      res.status = 201;
      res.set_content(StudyJson(study), "application/json");
    }));
    server.Get(R"(/studies/([A-Za-z0-9_-]+))",
               Guarded([this](const httplib::Request& req,
                              httplib::Response& res) {
                 res.set_content(StudyJson(store.GetStudy(req.matches[1])),
                                 "application/json");
               }));
    server.Get(R"(/studies/([A-Za-z0-9_-]+)/next)",
               Guarded([this](const httplib::Request& req,
                              httplib::Response& res) {
                 const std::string judge = req.get_param_value("judge");
                 if (judge.empty()) {
                   Fail(ErrorCode::kInvalidInput, "judge parameter required");
                 }
                 res.set_content(
                     JudgeTaskJson(store.NextTask(req.matches[1], judge)),
                     "application/json");
               }));
    server.Post(R"(/studies/([A-Za-z0-9_-]+)/votes)",
                Guarded([this](const httplib::Request& req,
                               httplib::Response& res) {
                  const json body = json::parse(req.body);
                  const VoteAck ack = store.SubmitVote(
                      req.matches[1], body.at("pair_id").get<std::string>(),
                      body.at("judge_id").get<std::string>(),
                      ParseChoice(body.at("choice").get<std::string>()),
                      body.value("timestamp", int64_t{-1}));
                  res.set_content(json{{"pair_id", ack.pair_id},
                                       {"votes", ack.votes},
                                       {"complete", ack.complete}}
                                      .dump(),
                                  "application/json");
                }));
    server.Get(R"(/studies/([A-Za-z0-9_-]+)/report)",
               Guarded([this](const httplib::Request& req,
                              httplib::Response& res) {
                 res.set_content(StudyReportJson(store.Report(req.matches[1])),
                                 "application/json");
               }));
    server.Get(R"(/images/([A-Za-z0-9_.-]+))",
               Guarded([this](const httplib::Request& req,
                              httplib::Response& res) {
                 const auto path = store.ResolveImageRef(req.matches[1].str());
                 std::ifstream in(path, std::ios::binary);
                 if (!in) Fail(ErrorCode::kNotFound, "image file missing");
                 std::ostringstream bytes;
                 bytes << in.rdbuf();
                 res.set_content(bytes.str(), "image/png");
               }));
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(json{{"error", "not_found"}, {"message", "no such route"}}
                            .dump(),
                        "application/json");
      }
    });
  }

  StudyStore& store;
  httplib::Server server;
};

HumanEvalServer::HumanEvalServer(StudyStore& store)
    : impl_(std::make_unique<Impl>(store)) {}

HumanEvalServer::~HumanEvalServer() { Stop(); }

int HumanEvalServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host.c_str());
  return impl_->server.bind_to_port(host.c_str(), port) ? port : -1;
}

bool HumanEvalServer::ListenAfterBind() {
  return impl_->server.listen_after_bind();
}

void HumanEvalServer::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace prodstage
