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

#ifndef PRODSTAGE_HUMANEVAL_H_
#define PRODSTAGE_HUMANEVAL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prodstage/rng.h"

namespace prodstage {

enum class Choice { kLeft, kRight };

std::string_view ChoiceName(Choice c);
// Throws kInvalidInput for anything but "left" / "right".
Choice ParseChoice(std::string_view text);

struct ComparisonPair {
  std::string pair_id;
  std::string image_a;
  std::string image_b;
  std::string method_a;
  std::string method_b;
  bool left_is_a = true;
  friend bool operator==(const ComparisonPair&, const ComparisonPair&) = default;
};

struct PairSpec {
  std::string image_a;
  std::string image_b;
  std::string method_a;
  std::string method_b;
};

struct StudySpec {
  std::string study_id;  // generated when empty
  std::string name;
  std::vector<PairSpec> pairs;
  int votes_required_per_pair = 3;
  uint64_t seed = kDefaultSeed;
};

struct Study {
  std::string study_id;
  std::string name;
  std::vector<ComparisonPair> pairs;
  int votes_required_per_pair = 3;
  uint64_t seed = kDefaultSeed;
  friend bool operator==(const Study&, const Study&) = default;
};

struct Vote {
  std::string pair_id;
  std::string judge_id;
  Choice choice = Choice::kLeft;
  int64_t timestamp = 0;  // unix milliseconds
  friend bool operator==(const Vote&, const Vote&) = default;
};

// Left/right placement of pair `index` under `seed`.
bool LeftIsA(uint64_t seed, std::size_t index);

// Pair ids are p0001, p0002, ... in spec order. Image paths are kept as
// given. Throws kInvalidInput on an empty spec, an even vote requirement or
// a pair comparing a method with itself.
Study MakeStudy(const StudySpec& spec, const std::string& study_id);

struct PairOutcome {
  std::string pair_id;
  std::string method_a;
  std::string method_b;
  int votes_a = 0;
  int votes_b = 0;
  bool complete = false;
  std::optional<std::string> winner;  // set on complete pairs
  friend bool operator==(const PairOutcome&, const PairOutcome&) = default;
};

struct MatchupResult {
  std::string method_a;
  std::string method_b;
  int wins_a = 0;
  int wins_b = 0;
  int decided = 0;
  int incomplete = 0;
  double percent_a = 0.0;  // wins_a / decided * 100
  double percent_b = 0.0;
  friend bool operator==(const MatchupResult&, const MatchupResult&) = default;
};

struct StudyReport {
  std::string study_id;
  std::vector<PairOutcome> pairs;
  // Orientation follows the first pair seen for each method pair.
  std::vector<MatchupResult> matchups;
  int complete_pairs = 0;
  int incomplete_pairs = 0;
  friend bool operator==(const StudyReport&, const StudyReport&) = default;
};

StudyReport ComputeReport(const Study& study, std::span<const Vote> votes);

// "76% of copy-paste images were better than pix2pix", one per matchup.
std::vector<std::string> SummaryLines(const StudyReport& report);

std::string StudyJson(const Study& study);
Study ParseStudyJson(std::string_view text);
StudySpec ParseStudySpecJson(std::string_view text);
std::string VoteJson(const Vote& vote);
Vote ParseVoteJson(std::string_view text);
std::string StudyReportJson(const StudyReport& report);

struct VoteAck {
  std::string pair_id;
  int votes = 0;
  bool complete = false;
};

// What a judge sees: no method labels, images by opaque reference.
struct JudgeTask {
  std::string study_id;
  std::string pair_id;
  std::string left_ref;
  std::string right_ref;
  int judged_by_me = 0;
  int total_pairs = 0;
};

std::string JudgeTaskJson(const std::optional<JudgeTask>& task);

// File-backed studies: <root>/<study_id>/study.json plus an append-only
// votes.jsonl. Existing studies are replayed on construction. Thread-safe;
// writes to one study are serialized, reads work on snapshots.
class StudyStore {
 public:
  explicit StudyStore(std::filesystem::path root);
  ~StudyStore();
  StudyStore(const StudyStore&) = delete;
  StudyStore& operator=(const StudyStore&) = delete;

  // Image paths are made absolute; every image must be readable (kIo naming
  // the pair). kConflict when the id is taken.
  Study CreateStudy(const StudySpec& spec);

  std::vector<std::string> ListStudies() const;
  // kNotFound for unknown ids.
  Study GetStudy(const std::string& study_id) const;
  std::vector<Vote> GetVotes(const std::string& study_id) const;

  // Lowest incomplete pair this judge has not voted on.
  std::optional<JudgeTask> NextTask(const std::string& study_id,
                                    const std::string& judge_id) const;

  // kConflict for a repeat (pair, judge) or a complete pair; kNotFound for
  // unknown studies or pairs. timestamp < 0 means now.
  VoteAck SubmitVote(const std::string& study_id, const std::string& pair_id,
                     const std::string& judge_id, Choice choice,
                     int64_t timestamp = -1);

  StudyReport Report(const std::string& study_id) const;

  // "<study>.<pair>.<L|R>" -> image file path; kNotFound when unknown.
  std::filesystem::path ResolveImageRef(std::string_view ref) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  struct Entry;

  std::shared_ptr<Entry> FindEntry(const std::string& study_id) const;
  void LoadAll();

  std::filesystem::path root_;
  mutable std::mutex mu_;  // guards entries_
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

std::string ImageRef(const std::string& study_id, const std::string& pair_id,
                     bool left);

}  // namespace prodstage

#endif  // PRODSTAGE_HUMANEVAL_H_
