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

#include <atomic>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "oracles.h"
#include "prodstage/humaneval.h"
#include "prodstage/humaneval_server.h"
#include "prodstage/png_io.h"

// After Eigen: <resolv.h> defines a _res macro.
#include "httplib.h"

namespace prodstage {
namespace {

using nlohmann::json;
using testing::ErrorCodeOf;
using testing::TempDir;

StudySpec SpecWith(int pairs, const std::filesystem::path& image, uint64_t seed = 42) {
  StudySpec spec;
  spec.name = "fixture";
  spec.seed = seed;
  for (int i = 0; i < pairs; ++i) {
    spec.pairs.push_back({image.string(), image.string(), "copy-paste", "pix2pix"});
  }
  return spec;
}

// Votes that express `prefers_a` for pair `pair` given its placement.
Vote VoteFor(const ComparisonPair& pair, const std::string& judge, bool prefers_a) {
  return {pair.pair_id, judge, prefers_a == pair.left_is_a ? Choice::kLeft : Choice::kRight, 0};
}

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    image_ = dir_.path() / "img.png";
    WritePng(image_, Uniform(4, 4, kWhite));
  }
  TempDir dir_;
  std::filesystem::path image_;
};

TEST(MakeStudy, HundredPairsWithSequentialIds) {
  StudySpec spec;
  for (int i = 0; i < 100; ++i) spec.pairs.push_back({"a.png", "b.png", "vanilla", "ground-truth"});
  const Study s = MakeStudy(spec, "s0001");
  ASSERT_EQ(s.pairs.size(), 100u);
  EXPECT_EQ(s.pairs[0].pair_id, "p0001");
  EXPECT_EQ(s.pairs[99].pair_id, "p0100");
  int left = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(s.pairs[i].left_is_a, LeftIsA(spec.seed, i));
    left += s.pairs[i].left_is_a ? 1 : 0;
  }
  EXPECT_GT(left, 20);
  EXPECT_LT(left, 80);
  EXPECT_EQ(MakeStudy(spec, "s0001"), s);
}

TEST(MakeStudy, Preconditions) {
  StudySpec empty;
  EXPECT_EQ(ErrorCodeOf([&] { MakeStudy(empty, "s"); }), ErrorCode::kInvalidInput);
  StudySpec even;
  even.pairs.push_back({"a", "b", "x", "y"});
  even.votes_required_per_pair = 2;
  EXPECT_EQ(ErrorCodeOf([&] { MakeStudy(even, "s"); }), ErrorCode::kInvalidInput);
  StudySpec self;
  self.pairs.push_back({"a", "b", "x", "x"});
  EXPECT_EQ(ErrorCodeOf([&] { MakeStudy(self, "s"); }), ErrorCode::kInvalidInput);
}

TEST(ComputeReport, UnanimousWinnerAtHundredPercent) {
  StudySpec spec;
  for (int i = 0; i < 3; ++i) spec.pairs.push_back({"a", "b", "X", "Y"});
  const Study s = MakeStudy(spec, "s");
  std::vector<Vote> votes;
  for (const auto& p : s.pairs) {
    for (const char* j : {"j1", "j2", "j3"}) votes.push_back(VoteFor(p, j, true));
  }
  const StudyReport r = ComputeReport(s, votes);
  ASSERT_EQ(r.matchups.size(), 1u);
  EXPECT_EQ(r.matchups[0].percent_a, 100.0);
  EXPECT_EQ(r.matchups[0].wins_a, 3);
  EXPECT_EQ(r.complete_pairs, 3);
}

TEST(ComputeReport, LeftMajorityWithRightSideAIsWonByB) {
  Study s = MakeStudy(SpecWith(1, "img.png"), "s");
  s.pairs[0].left_is_a = false;
  const std::vector<Vote> votes = {{"p0001", "j1", Choice::kLeft, 0},
                                   {"p0001", "j2", Choice::kLeft, 0},
                                   {"p0001", "j3", Choice::kRight, 0}};
  const StudyReport r = ComputeReport(s, votes);
  ASSERT_TRUE(r.pairs[0].winner.has_value());
  EXPECT_EQ(*r.pairs[0].winner, "pix2pix");
  EXPECT_EQ(r.pairs[0].votes_b, 2);
  EXPECT_EQ(r.pairs[0].votes_a, 1);
}

TEST(ComputeReport, IncompletePairsHaveNoWinner) {
  const Study s = MakeStudy(SpecWith(2, "img.png"), "s");
  const std::vector<Vote> votes = {VoteFor(s.pairs[0], "j1", true)};
  const StudyReport r = ComputeReport(s, votes);
  EXPECT_FALSE(r.pairs[0].winner.has_value());
  EXPECT_EQ(r.incomplete_pairs, 2);
  EXPECT_EQ(r.matchups[0].decided, 0);
  EXPECT_EQ(r.matchups[0].incomplete, 2);
  EXPECT_EQ(r.matchups[0].percent_a, 0.0);
}

TEST(ComputeReport, PublishedSummaryLines) {
  StudySpec spec;
  const auto add = [&](int n, const char* a, const char* b) {
    for (int i = 0; i < n; ++i) spec.pairs.push_back({"x", "y", a, b});
  };
  add(100, "pix2pix", "ground truth");
  add(100, "copy-paste", "ground truth");
  add(100, "copy-paste", "pix2pix");
  const Study s = MakeStudy(spec, "s");
  std::vector<Vote> votes;
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    const int block = static_cast<int>(i / 100);
    const int idx = static_cast<int>(i % 100);
    const bool a_wins = (block == 1 && idx < 3) || (block == 2 && idx < 76);
    votes.push_back(VoteFor(s.pairs[i], "j1", a_wins));
    votes.push_back(VoteFor(s.pairs[i], "j2", a_wins));
    votes.push_back(VoteFor(s.pairs[i], "j3", !a_wins));
  }
  const StudyReport r = ComputeReport(s, votes);
  EXPECT_EQ(SummaryLines(r),
            (std::vector<std::string>{"0% of pix2pix images were better than ground truth",
                                      "3% of copy-paste images were better than ground truth",
                                      "76% of copy-paste images were better than pix2pix"}));
}

TEST(ComputeReport, FlipInvariance) {
  Rng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    StudySpec spec = SpecWith(rng.UniformInt(1, 12), "img.png", rng.NextU64());
    const Study s = MakeStudy(spec, "s");
    std::vector<Vote> votes;
    for (const auto& p : s.pairs) {
      const int n = rng.UniformInt(0, 3);
      for (int j = 0; j < n; ++j) {
        votes.push_back({p.pair_id, "j" + std::to_string(j),
                         rng.Bernoulli(0.5) ? Choice::kLeft : Choice::kRight, 0});
      }
    }
    Study flipped = s;
    for (auto& p : flipped.pairs) p.left_is_a = !p.left_is_a;
    std::vector<Vote> flipped_votes = votes;
    for (auto& v : flipped_votes) v.choice = v.choice == Choice::kLeft ? Choice::kRight : Choice::kLeft;
    const StudyReport r = ComputeReport(s, votes);
    EXPECT_EQ(ComputeReport(flipped, flipped_votes), r);
    for (const auto& m : r.matchups) {
      EXPECT_EQ(m.wins_a + m.wins_b, m.decided);
      EXPECT_GE(m.percent_a, 0.0);
      EXPECT_LE(m.percent_a, 100.0);
    }
  }
}

TEST(Json, StudyAndVoteRoundTrip) {
  const Study s = MakeStudy(SpecWith(4, "img.png", 9), "s0003");
  EXPECT_EQ(ParseStudyJson(StudyJson(s)), s);
  const Vote v{"p0002", "judge-x", Choice::kRight, 1700000000123};
  EXPECT_EQ(ParseVoteJson(VoteJson(v)), v);
  EXPECT_EQ(ErrorCodeOf([] { ParseChoice("middle"); }), ErrorCode::kInvalidInput);
}

TEST(Json, JudgeTaskHidesMethodLabels) {
  const JudgeTask t{"s0001", "p0001", "s0001.p0001.L", "s0001.p0001.R", 0, 3};
  const std::string text = JudgeTaskJson(t);
  const json j = json::parse(text);
  EXPECT_EQ(j.at("task").at("left"), "/images/s0001.p0001.L");
  EXPECT_EQ(j.at("progress").at("total"), 3);
  EXPECT_EQ(text.find("method"), std::string::npos);
  EXPECT_TRUE(json::parse(JudgeTaskJson(std::nullopt)).at("task").is_null());
}

TEST_F(StoreTest, CreateStudyNeedsReadableImages) {
  StudyStore store(dir_.path() / "root");
  StudySpec spec = SpecWith(2, image_);
  spec.pairs[1].image_b = (dir_.path() / "missing.png").string();
  try {
    store.CreateStudy(spec);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("p0002"), std::string::npos);
  }
  EXPECT_TRUE(store.ListStudies().empty());
}

TEST_F(StoreTest, OnePairThreeVotesCompletes) {
  StudyStore store(dir_.path() / "root");
  const Study s = store.CreateStudy(SpecWith(1, image_));
  EXPECT_EQ(s.study_id, "s0001");
  const VoteAck a1 = store.SubmitVote(s.study_id, "p0001", "j1", Choice::kLeft);
  EXPECT_EQ(a1.votes, 1);
  EXPECT_FALSE(a1.complete);
  EXPECT_EQ(ErrorCodeOf([&] { store.SubmitVote(s.study_id, "p0001", "j1", Choice::kRight); }),
            ErrorCode::kConflict);
  store.SubmitVote(s.study_id, "p0001", "j2", Choice::kLeft);
  const VoteAck a3 = store.SubmitVote(s.study_id, "p0001", "j3", Choice::kRight);
  EXPECT_EQ(a3.votes, 3);
  EXPECT_TRUE(a3.complete);
  EXPECT_EQ(ErrorCodeOf([&] { store.SubmitVote(s.study_id, "p0001", "j4", Choice::kLeft); }),
            ErrorCode::kConflict);
  EXPECT_EQ(ErrorCodeOf([&] { store.SubmitVote(s.study_id, "p0009", "j4", Choice::kLeft); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(ErrorCodeOf([&] { store.SubmitVote("s0404", "p0001", "j4", Choice::kLeft); }),
            ErrorCode::kNotFound);
}

TEST_F(StoreTest, NextTaskOrderAndExhaustion) {
  StudyStore store(dir_.path() / "root");
  const Study s = store.CreateStudy(SpecWith(3, image_));
  auto t = store.NextTask(s.study_id, "alice");
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->pair_id, "p0001");
  EXPECT_EQ(t->judged_by_me, 0);
  EXPECT_EQ(t->total_pairs, 3);
  EXPECT_EQ(t->left_ref, ImageRef(s.study_id, "p0001", true));
  // Pre-seed p0002 to completion by others: alice skips it.
  for (const char* j : {"b", "c", "d"}) store.SubmitVote(s.study_id, "p0002", j, Choice::kLeft);
  store.SubmitVote(s.study_id, "p0001", "alice", Choice::kLeft);
  t = store.NextTask(s.study_id, "alice");
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->pair_id, "p0003");
  EXPECT_EQ(t->judged_by_me, 1);
  store.SubmitVote(s.study_id, "p0003", "alice", Choice::kRight);
  EXPECT_FALSE(store.NextTask(s.study_id, "alice").has_value());
  EXPECT_EQ(ErrorCodeOf([&] { store.NextTask("s9999", "alice"); }), ErrorCode::kNotFound);
}

TEST_F(StoreTest, ReplayReconstructsStateAndToleratesTornTail) {
  StudyReport before;
  std::string id;
  {
    StudyStore store(dir_.path() / "root");
    const Study s = store.CreateStudy(SpecWith(4, image_, 7));
    id = s.study_id;
    Rng rng(82);
    for (const auto& p : s.pairs) {
      for (const char* j : {"j1", "j2", "j3"}) {
        if (rng.Bernoulli(0.7)) {
          store.SubmitVote(id, p.pair_id, j, rng.Bernoulli(0.5) ? Choice::kLeft : Choice::kRight, 5);
        }
      }
    }
    before = store.Report(id);
  }
  {
    std::ofstream tail(dir_.path() / "root" / id / "votes.jsonl", std::ios::app);
    tail << "{\"pair_id\":\"p0001\",\"judge_";
  }
  StudyStore reopened(dir_.path() / "root");
  EXPECT_EQ(reopened.Report(id), before);
  EXPECT_EQ(reopened.ListStudies(), std::vector<std::string>{id});
  const Study again = reopened.CreateStudy(SpecWith(1, image_));
  EXPECT_EQ(again.study_id, "s0002");
}

TEST_F(StoreTest, ExplicitDuplicateStudyIdConflicts) {
  StudyStore store(dir_.path() / "root");
  StudySpec spec = SpecWith(1, image_);
  spec.study_id = "mine";
  store.CreateStudy(spec);
  EXPECT_EQ(ErrorCodeOf([&] { store.CreateStudy(spec); }), ErrorCode::kConflict);
}

TEST_F(StoreTest, ConcurrentVotesAreSerialized) {
  StudyStore store(dir_.path() / "root");
  const Study s = store.CreateStudy(SpecWith(20, image_));
  std::vector<std::thread> threads;
  std::atomic<int> accepted{0};
  std::atomic<int> conflicts{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (const auto& p : s.pairs) {
        try {
          store.SubmitVote(s.study_id, p.pair_id, "j" + std::to_string(t % 4), Choice::kLeft);
          ++accepted;
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kConflict) ++conflicts;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(accepted.load(), 20 * 3);
  EXPECT_EQ(accepted.load() + conflicts.load(), 8 * 20);
  EXPECT_EQ(store.GetVotes(s.study_id).size(), 60u);
  StudyStore reopened(dir_.path() / "root");
  EXPECT_EQ(reopened.GetVotes(s.study_id).size(), 60u);
}

TEST_F(StoreTest, ResolveImageRef) {
  StudyStore store(dir_.path() / "root");
  const Study s = store.CreateStudy(SpecWith(1, image_));
  EXPECT_EQ(store.ResolveImageRef(ImageRef(s.study_id, "p0001", true)),
            std::filesystem::absolute(image_));
  EXPECT_EQ(ErrorCodeOf([&] { store.ResolveImageRef("s0001.p0009.L"); }), ErrorCode::kNotFound);
  EXPECT_TRUE(ErrorCodeOf([&] { store.ResolveImageRef("garbage"); }).has_value());
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(HttpStatusFor(ErrorCode::kNotFound), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kConflict), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kInvalidInput), 400);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kNumerical), 500);
}

class ServerTest : public StoreTest {
 protected:
  void SetUp() override {
    StoreTest::SetUp();
    store_ = std::make_unique<StudyStore>(dir_.path() / "root");
    server_ = std::make_unique<HumanEvalServer>(*store_);
    port_ = server_->Bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->ListenAfterBind(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->Stop();
    if (thread_.joinable()) thread_.join();
  }

  json SpecJson(int pairs) const {
    json spec = {{"name", "http"}, {"seed", 5}, {"pairs", json::array()}};
    for (int i = 0; i < pairs; ++i) {
      spec["pairs"].push_back({{"image_a", image_.string()},
                               {"image_b", image_.string()},
                               {"method_a", "copy-paste"},
                               {"method_b", "ground truth"}});
    }
    return spec;
  }

  std::unique_ptr<StudyStore> store_;
  std::unique_ptr<HumanEvalServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServerTest, FullJudgingFlow) {
  auto res = client_->Post("/studies", SpecJson(2).dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201);
  const std::string id = json::parse(res->body).at("study_id");

  res = client_->Get("/studies/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("pairs").size(), 2u);

  for (const char* judge : {"a", "b", "c"}) {
    for (int round = 0; round < 2; ++round) {
      res = client_->Get("/studies/" + id + "/next?judge=" + judge);
      ASSERT_TRUE(res);
      ASSERT_EQ(res->status, 200);
      EXPECT_EQ(res->body.find("method"), std::string::npos);
      const json task = json::parse(res->body);
      ASSERT_FALSE(task.at("task").is_null());
      EXPECT_EQ(task.at("progress").at("judged"), round);
      const std::string left = task.at("task").at("left");
      auto img = client_->Get(left);
      ASSERT_TRUE(img);
      EXPECT_EQ(img->status, 200);
      EXPECT_EQ(img->get_header_value("Content-Type"), "image/png");
      const json vote = {{"pair_id", task.at("task").at("pair_id")},
                         {"judge_id", judge},
                         {"choice", "left"}};
      res = client_->Post("/studies/" + id + "/votes", vote.dump(), "application/json");
      ASSERT_TRUE(res);
      EXPECT_EQ(res->status, 200);
    }
    res = client_->Get("/studies/" + id + "/next?judge=" + judge);
    EXPECT_TRUE(json::parse(res->body).at("task").is_null());
  }
  res = client_->Get("/studies/" + id + "/report");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const json report = json::parse(res->body);
  EXPECT_EQ(report.at("complete_pairs"), 2);
  EXPECT_EQ(report.at("summary").size(), 1u);
  const StudyReport direct = store_->Report(id);
  EXPECT_EQ(report.at("matchups")[0].at("wins_a"), direct.matchups[0].wins_a);
}

TEST_F(ServerTest, ErrorStatuses) {
  auto res = client_->Get("/studies/s0999");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body).at("error"), "not_found");

  res = client_->Post("/studies", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = client_->Post("/studies", SpecJson(1).dump(), "application/json");
  const std::string id = json::parse(res->body).at("study_id");
  res = client_->Get("/studies/" + id + "/next");
  EXPECT_EQ(res->status, 400);

  const json vote = {{"pair_id", "p0001"}, {"judge_id", "j"}, {"choice", "left"}};
  EXPECT_EQ(client_->Post("/studies/" + id + "/votes", vote.dump(), "application/json")->status, 200);
  EXPECT_EQ(client_->Post("/studies/" + id + "/votes", vote.dump(), "application/json")->status, 409);
  const json bad_pair = {{"pair_id", "p0042"}, {"judge_id", "j"}, {"choice", "left"}};
  EXPECT_EQ(client_->Post("/studies/" + id + "/votes", bad_pair.dump(), "application/json")->status,
            404);
  const json bad_choice = {{"pair_id", "p0001"}, {"judge_id", "k"}, {"choice", "up"}};
  EXPECT_EQ(
      client_->Post("/studies/" + id + "/votes", bad_choice.dump(), "application/json")->status,
      400);
  EXPECT_EQ(client_->Get("/studies/s0999/report")->status, 404);
  EXPECT_EQ(client_->Get("/images/" + id + ".p0077.L")->status, 404);
}

}  // namespace
}  // namespace prodstage
