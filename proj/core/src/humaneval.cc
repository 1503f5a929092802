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

#include "prodstage/humaneval.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "prodstage/error.h"

namespace prodstage {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr char kStudyFile[] = "study.json";
constexpr char kVotesFile[] = "votes.jsonl";

bool ValidId(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

std::string PairId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "p%04zu", index + 1);
  return buf;
}

int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.flush();
    if (!out) Fail(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot rename into " + path.string());
}

void AppendDurable(const fs::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) {
    Fail(ErrorCode::kIo, "cannot open " + path.string() + ": " +
                             std::strerror(errno));
  }
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      Fail(ErrorCode::kIo, "write failed on " + path.string());
    }
    done += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) Fail(ErrorCode::kIo, "fsync failed on " + path.string());
}

std::string FormatPercent(double pct) {
  char buf[32];
  if (std::abs(pct - std::round(pct)) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%.0f", pct);
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f", pct);
  }
  return buf;
}

template <typename Json>
Json ParseJson(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string_view ChoiceName(Choice c) {
  return c == Choice::kLeft ? "left" : "right";
}

Choice ParseChoice(std::string_view text) {
  if (text == "left") return Choice::kLeft;
  if (text == "right") return Choice::kRight;
  Fail(ErrorCode::kInvalidInput,
       "choice must be \"left\" or \"right\", got \"" + std::string(text) +
           "\"");
}

bool LeftIsA(uint64_t seed, std::size_t index) {
  return (DeriveSeed(seed, index) & 1ULL) == 0;
}

Study MakeStudy(const StudySpec& spec, const std::string& study_id) {
  if (!ValidId(study_id)) {
    Fail(ErrorCode::kInvalidInput, "invalid study id \"" + study_id + "\"");
  }
  if (spec.pairs.empty()) {
    Fail(ErrorCode::kInvalidInput, "a study needs at least one pair");
  }
  if (spec.votes_required_per_pair < 1 || spec.votes_required_per_pair % 2 == 0) {
    Fail(ErrorCode::kInvalidInput, "votes_required_per_pair must be odd");
  }
  Study study;
  study.study_id = study_id;
  study.name = spec.name;
  study.votes_required_per_pair = spec.votes_required_per_pair;
  study.seed = spec.seed;
  for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
    const PairSpec& p = spec.pairs[i];
    const std::string id = PairId(i);
    if (p.method_a == p.method_b) {
      Fail(ErrorCode::kInvalidInput,
           "pair " + id + " compares \"" + p.method_a + "\" with itself");
    }
    study.pairs.push_back(
        {id, p.image_a, p.image_b, p.method_a, p.method_b, LeftIsA(spec.seed, i)});
  }
  return study;
}

StudyReport ComputeReport(const Study& study, std::span<const Vote> votes) {
  StudyReport report;
  report.study_id = study.study_id;
  std::map<std::string, std::size_t> index;
  for (const ComparisonPair& p : study.pairs) {
    index[p.pair_id] = report.pairs.size();
    PairOutcome outcome;
    outcome.pair_id = p.pair_id;
    outcome.method_a = p.method_a;
    outcome.method_b = p.method_b;
    report.pairs.push_back(std::move(outcome));
  }
  for (const Vote& v : votes) {
    const auto it = index.find(v.pair_id);
    if (it == index.end()) continue;
    const ComparisonPair& pair = study.pairs[it->second];
    const bool chose_a = (v.choice == Choice::kLeft) == pair.left_is_a;
    PairOutcome& out = report.pairs[it->second];
    (chose_a ? out.votes_a : out.votes_b) += 1;
  }

  std::map<std::pair<std::string, std::string>, std::size_t> matchup_index;
  for (PairOutcome& out : report.pairs) {
    const int cast = out.votes_a + out.votes_b;
    out.complete = cast >= study.votes_required_per_pair;
    if (out.complete) {
      if (2 * out.votes_a > cast) out.winner = out.method_a;
      if (2 * out.votes_b > cast) out.winner = out.method_b;
    }
    (out.complete ? report.complete_pairs : report.incomplete_pairs) += 1;

    const auto key = std::minmax(out.method_a, out.method_b);
    auto [it, inserted] = matchup_index.try_emplace(
        std::pair(key.first, key.second), report.matchups.size());
    if (inserted) {
      MatchupResult m;
      m.method_a = out.method_a;
      m.method_b = out.method_b;
      report.matchups.push_back(std::move(m));
    }
    MatchupResult& m = report.matchups[it->second];
    if (!out.winner) {
      if (!out.complete) ++m.incomplete;
      continue;
    }
    ++m.decided;
    (*out.winner == m.method_a ? m.wins_a : m.wins_b) += 1;
  }
  for (MatchupResult& m : report.matchups) {
    if (m.decided > 0) {
      m.percent_a = 100.0 * m.wins_a / m.decided;
      m.percent_b = 100.0 * m.wins_b / m.decided;
    }
  }
  return report;
}

std::vector<std::string> SummaryLines(const StudyReport& report) {
  std::vector<std::string> lines;
  for (const MatchupResult& m : report.matchups) {
    lines.push_back(FormatPercent(m.percent_a) + "% of " + m.method_a +
                    " images were better than " + m.method_b);
  }
  return lines;
}

std::string StudyJson(const Study& study) {
  ojson j;
  j["study_id"] = study.study_id;
  j["name"] = study.name;
  j["votes_required_per_pair"] = study.votes_required_per_pair;
  j["seed"] = study.seed;
  ojson pairs = ojson::array();
  for (const ComparisonPair& p : study.pairs) {
    pairs.push_back({{"pair_id", p.pair_id},
                     {"image_a", p.image_a},
                     {"image_b", p.image_b},
                     {"method_a", p.method_a},
                     {"method_b", p.method_b},
                     {"left_is_a", p.left_is_a}});
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2) + "\n";
}

Study ParseStudyJson(std::string_view text) {
  const ojson j = ParseJson<ojson>(text, "study manifest");
  try {
    Study s;
    s.study_id = j.at("study_id");
    s.name = j.at("name");
    s.votes_required_per_pair = j.at("votes_required_per_pair");
    s.seed = j.at("seed");
    for (const auto& p : j.at("pairs")) {
      s.pairs.push_back({p.at("pair_id"), p.at("image_a"), p.at("image_b"),
                         p.at("method_a"), p.at("method_b"), p.at("left_is_a")});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("study manifest: ") + e.what());
  }
}

StudySpec ParseStudySpecJson(std::string_view text) {
  const ojson j = ParseJson<ojson>(text, "study spec");
  try {
    StudySpec spec;
    spec.study_id = j.value("study_id", "");
    spec.name = j.value("name", "");
    spec.votes_required_per_pair = j.value("votes_required_per_pair", 3);
    spec.seed = j.value("seed", kDefaultSeed);
    for (const auto& p : j.at("pairs")) {
      spec.pairs.push_back(
          {p.at("image_a"), p.at("image_b"), p.at("method_a"), p.at("method_b")});
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidInput, std::string("study spec: ") + e.what());
  }
}

std::string VoteJson(const Vote& vote) {
  ojson j;
  j["pair_id"] = vote.pair_id;
  j["judge_id"] = vote.judge_id;
  j["choice"] = ChoiceName(vote.choice);
  j["timestamp"] = vote.timestamp;
  return j.dump();
}

Vote ParseVoteJson(std::string_view text) {
  const ojson j = ParseJson<ojson>(text, "vote");
  try {
    Vote v;
    v.pair_id = j.at("pair_id");
    v.judge_id = j.at("judge_id");
    v.choice = ParseChoice(j.at("choice").get<std::string>());
    v.timestamp = j.value("timestamp", int64_t{0});
    return v;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("vote: ") + e.what());
  }
}

std::string StudyReportJson(const StudyReport& report) {
  ojson j;
  j["study_id"] = report.study_id;
  j["complete_pairs"] = report.complete_pairs;
  j["incomplete_pairs"] = report.incomplete_pairs;
  ojson pairs = ojson::array();
  for (const PairOutcome& p : report.pairs) {
    pairs.push_back({{"pair_id", p.pair_id},
                     {"method_a", p.method_a},
                     {"method_b", p.method_b},
                     {"votes_a", p.votes_a},
                     {"votes_b", p.votes_b},
                     {"complete", p.complete},
                     {"winner", p.winner ? ojson(*p.winner) : ojson(nullptr)}});
  }
  j["pairs"] = std::move(pairs);
  ojson matchups = ojson::array();
  for (const MatchupResult& m : report.matchups) {
    matchups.push_back({{"method_a", m.method_a},
                        {"method_b", m.method_b},
                        {"wins_a", m.wins_a},
                        {"wins_b", m.wins_b},
                        {"decided", m.decided},
                        {"incomplete", m.incomplete},
                        {"percent_a", m.percent_a},
                        {"percent_b", m.percent_b}});
  }
  j["matchups"] = std::move(matchups);
  j["summary"] = SummaryLines(report);
  return j.dump(2) + "\n";
}

std::string ImageRef(const std::string& study_id, const std::string& pair_id,
                     bool left) {
  return study_id + "." + pair_id + (left ? ".L" : ".R");
}

std::string JudgeTaskJson(const std::optional<JudgeTask>& task) {
  ojson j;
  if (!task) {
    j["task"] = nullptr;
    return j.dump();
  }
  j["task"] = {{"study_id", task->study_id},
               {"pair_id", task->pair_id},
               {"left", "/images/" + task->left_ref},
               {"right", "/images/" + task->right_ref}};
  j["progress"] = {{"judged", task->judged_by_me},
                   {"total", task->total_pairs}};
  return j.dump();
}

// ---------------------------------------------------------------------------
// StudyStore

namespace {

struct StudyState {
  Study study;
  std::vector<Vote> votes;
  std::map<std::string, std::set<std::string>> judges;  // pair -> judges
};

}  // namespace

struct StudyStore::Entry {
  fs::path dir;
  std::mutex write_mu;  // single writer per study
  mutable std::mutex snapshot_mu;
  std::shared_ptr<const StudyState> state;

  std::shared_ptr<const StudyState> Snapshot() const {
    std::lock_guard lock(snapshot_mu);
    return state;
  }
  void Publish(std::shared_ptr<const StudyState> next) {
    std::lock_guard lock(snapshot_mu);
    state = std::move(next);
  }
};

StudyStore::StudyStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create study root " + root_.string());
  LoadAll();
}

StudyStore::~StudyStore() = default;

void StudyStore::LoadAll() {
  std::vector<fs::path> dirs;
  for (const auto& d : fs::directory_iterator(root_)) {
    if (d.is_directory() && fs::exists(d.path() / kStudyFile)) {
      dirs.push_back(d.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    auto state = std::make_shared<StudyState>();
    state->study = ParseStudyJson(ReadFile(dir / kStudyFile));
    if (fs::exists(dir / kVotesFile)) {
      const std::string log = ReadFile(dir / kVotesFile);
      std::size_t pos = 0;
      // A trailing fragment without a newline is an interrupted append.
      while (true) {
        const std::size_t nl = log.find('\n', pos);
        if (nl == std::string::npos) break;
        const std::string_view line(log.data() + pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        Vote v = ParseVoteJson(line);
        state->judges[v.pair_id].insert(v.judge_id);
        state->votes.push_back(std::move(v));
      }
    }
    auto entry = std::make_shared<Entry>();
    entry->dir = dir;
    entry->state = std::move(state);
    entries_[entry->state->study.study_id] = std::move(entry);
  }
}

std::shared_ptr<StudyStore::Entry> StudyStore::FindEntry(
    const std::string& study_id) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(study_id);
  if (it == entries_.end()) {
    Fail(ErrorCode::kNotFound, "unknown study \"" + study_id + "\"");
  }
  return it->second;
}

Study StudyStore::CreateStudy(const StudySpec& spec) {
  std::lock_guard lock(mu_);
  std::string id = spec.study_id;
  if (id.empty()) {
    for (std::size_t n = entries_.size() + 1;; ++n) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "s%04zu", n);
      if (!entries_.count(buf) && !fs::exists(root_ / buf)) {
        id = buf;
        break;
      }
    }
  }
  if (entries_.count(id) || fs::exists(root_ / id)) {
    Fail(ErrorCode::kConflict, "study \"" + id + "\" already exists");
  }
  Study study = MakeStudy(spec, id);
  for (ComparisonPair& p : study.pairs) {
    for (std::string* image : {&p.image_a, &p.image_b}) {
      const fs::path path = fs::absolute(*image);
      std::ifstream probe(path, std::ios::binary);
      if (!probe || !fs::is_regular_file(path)) {
        Fail(ErrorCode::kIo,
             "pair " + p.pair_id + ": cannot read image " + path.string());
      }
      *image = path.lexically_normal().string();
    }
  }
  const fs::path dir = root_ / id;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
  WriteFileAtomic(dir / kStudyFile, StudyJson(study));
  std::ofstream(dir / kVotesFile, std::ios::binary | std::ios::app);

  auto state = std::make_shared<StudyState>();
  state->study = study;
  auto entry = std::make_shared<Entry>();
  entry->dir = dir;
  entry->state = std::move(state);
  entries_[id] = std::move(entry);
  return study;
}

std::vector<std::string> StudyStore::ListStudies() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, entry] : entries_) ids.push_back(id);
  return ids;
}

Study StudyStore::GetStudy(const std::string& study_id) const {
  return FindEntry(study_id)->Snapshot()->study;
}

std::vector<Vote> StudyStore::GetVotes(const std::string& study_id) const {
  return FindEntry(study_id)->Snapshot()->votes;
}

std::optional<JudgeTask> StudyStore::NextTask(const std::string& study_id,
                                              const std::string& judge_id) const {
  const auto state = FindEntry(study_id)->Snapshot();
  const Study& study = state->study;
  int judged = 0;
  for (const auto& [pair, judges] : state->judges) {
    judged += static_cast<int>(judges.count(judge_id));
  }
  for (const ComparisonPair& p : study.pairs) {
    const auto it = state->judges.find(p.pair_id);
    if (it != state->judges.end()) {
      if (static_cast<int>(it->second.size()) >= study.votes_required_per_pair) {
        continue;
      }
      if (it->second.count(judge_id)) continue;
    }
    return JudgeTask{study.study_id,
                     p.pair_id,
                     ImageRef(study.study_id, p.pair_id, true),
                     ImageRef(study.study_id, p.pair_id, false),
                     judged,
                     static_cast<int>(study.pairs.size())};
  }
  return std::nullopt;
}

VoteAck StudyStore::SubmitVote(const std::string& study_id,
                               const std::string& pair_id,
                               const std::string& judge_id, Choice choice,
                               int64_t timestamp) {
  if (judge_id.empty()) Fail(ErrorCode::kInvalidInput, "judge_id is required");
  const auto entry = FindEntry(study_id);
  std::lock_guard write_lock(entry->write_mu);
  const auto current = entry->Snapshot();
  const Study& study = current->study;
  const bool known = std::any_of(
      study.pairs.begin(), study.pairs.end(),
      [&](const ComparisonPair& p) { return p.pair_id == pair_id; });
  if (!known) {
    Fail(ErrorCode::kNotFound,
         "study " + study_id + " has no pair \"" + pair_id + "\"");
  }
  std::size_t cast = 0;
  if (const auto it = current->judges.find(pair_id);
      it != current->judges.end()) {
    if (it->second.count(judge_id)) {
      Fail(ErrorCode::kConflict,
           "judge " + judge_id + " already voted on " + pair_id);
    }
    cast = it->second.size();
  }
  if (static_cast<int>(cast) >= study.votes_required_per_pair) {
    Fail(ErrorCode::kConflict, "pair " + pair_id + " is already complete");
  }
  const Vote vote{pair_id, judge_id, choice,
                  timestamp < 0 ? NowMillis() : timestamp};
  AppendDurable(entry->dir / kVotesFile, VoteJson(vote) + "\n");

  auto next = std::make_shared<StudyState>(*current);
  next->votes.push_back(vote);
  next->judges[pair_id].insert(judge_id);
  entry->Publish(next);
  const int votes = static_cast<int>(cast + 1);
  return {pair_id, votes, votes >= study.votes_required_per_pair};
}

StudyReport StudyStore::Report(const std::string& study_id) const {
  const auto state = FindEntry(study_id)->Snapshot();
  return ComputeReport(state->study, state->votes);
}

fs::path StudyStore::ResolveImageRef(std::string_view ref) const {
  const std::size_t last = ref.rfind('.');
  const std::size_t first = ref.find('.');
  if (last == std::string_view::npos || first == last) {
    Fail(ErrorCode::kNotFound, "malformed image reference");
  }
  const std::string study_id(ref.substr(0, first));
  const std::string pair_id(ref.substr(first + 1, last - first - 1));
  const std::string_view side = ref.substr(last + 1);
  if (side != "L" && side != "R") {
    Fail(ErrorCode::kNotFound, "malformed image reference");
  }
  const auto state = FindEntry(study_id)->Snapshot();
  for (const ComparisonPair& p : state->study.pairs) {
    if (p.pair_id != pair_id) continue;
    const bool left = side == "L";
    return left == p.left_is_a ? p.image_a : p.image_b;
  }
  Fail(ErrorCode::kNotFound, "unknown pair \"" + pair_id + "\"");
}

}  // namespace prodstage
