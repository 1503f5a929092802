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

#include <fstream>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "oracles.h"
#include "prodstage/png_io.h"
#include "run_config.h"

namespace prodstage::cli {
namespace {

using nlohmann::json;
using testing::ErrorCodeOf;
using testing::ReadBytes;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "prodstage");
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

TEST(Cli, NoArgumentsPrintsUsageAndExitsOne) {
  const Result r = RunCli({});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_NE(r.err.find("train-inpaint"), std::string::npos);
}

TEST(Cli, UnknownSubcommandAndFlag) {
  EXPECT_EQ(RunCli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"stats", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"stage", "--mode", "teleport"}).code, kExitUsage);
}

TEST(Cli, MissingRequiredInputIsUsageError) {
  TempDir dir;
  EXPECT_EQ(RunCli({"stats", "--out", dir.path().string()}).code, kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const Result r = RunCli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("eval-fid"), std::string::npos);
}

TEST(Cli, RuntimeFailureExitsTwo) {
  TempDir dir;
  const Result r = RunCli({"stats", "--catalog", (dir.path() / "missing.jsonl").string(), "--out",
                           dir.path().string()});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("io"), std::string::npos);
}

TEST(Cli, EvalFidOnIdenticalSetsIsZero) {
  TempDir dir;
  const std::string scenes = (dir.path() / "scenes").string();
  ASSERT_EQ(RunCli({"synth", "--kind", "scenes", "--count", "6", "--out", scenes}).code, 0);
  const Result r = RunCli({"eval-fid", "--real", scenes, "--gen", scenes, "--out",
                           (dir.path() / "fid").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir.path() / "fid" / "fid.json");
  const json j = json::parse(in);
  EXPECT_LE(j.at("fid").get<double>(), 1e-6);
  EXPECT_EQ(j.at("n_real"), 6);
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = dir_.path().string();
    ASSERT_EQ(RunCli({"synth", "--count", "4", "--out", root_ + "/catalog"}).code, 0);
    ASSERT_EQ(RunCli({"index", "--catalog", root_ + "/catalog/catalog.jsonl", "--out",
                      root_ + "/index"})
                  .code,
              0);
  }
  TempDir dir_;
  std::string root_;
};

TEST_F(PipelineTest, CopyPasteStageWithTwoDonors) {
  const Result train = RunCli({"train-inpaint", "--synthetic", "8", "--steps", "2", "--out",
                               root_ + "/inpaint"});
  ASSERT_EQ(train.code, 0) << train.err;
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "inpaint" / "inpaint_log.csv"));
  const Result r = RunCli({"stage", "--mode", "copy-paste", "--k", "2", "--image",
                           root_ + "/catalog/images/item-00-01.png", "--inpainter",
                           root_ + "/inpaint/inpainter.ckpt", "--index", root_ + "/index/index.bin",
                           "--catalog", root_ + "/catalog/catalog.jsonl", "--out", root_ + "/stage"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadPng(dir_.path() / "stage" / "stage_00.png").width(), 64);
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "stage" / "stage_01.png"));
  EXPECT_FALSE(std::filesystem::exists(dir_.path() / "stage" / "stage_02.png"));
  std::ifstream in(dir_.path() / "stage" / "stage.jsonl");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const json j = json::parse(line);
    EXPECT_EQ(j.at("source_id"), "item-00-01");
    EXPECT_NE(j.at("donor_id"), "item-00-01");
    ++n;
  }
  EXPECT_EQ(n, 2);
}

TEST_F(PipelineTest, IngestStatsRetrieveEvalRetrieval) {
  Result r = RunCli({"ingest", "--catalog", root_ + "/catalog/catalog.jsonl", "--staged", "--out",
                     root_ + "/ingest"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Catalog staged = IngestCatalog(dir_.path() / "ingest" / "catalog.jsonl");
  EXPECT_EQ(staged.size(), 8u);
  for (const auto& e : staged.entries()) EXPECT_TRUE(e.staged);

  r = RunCli({"stats", "--catalog", root_ + "/catalog/catalog.jsonl", "--depth", "1", "--out",
              root_ + "/stats"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "stats" / "stats.json"));

  r = RunCli({"retrieve", "--index", root_ + "/index/index.bin", "--image",
              root_ + "/catalog/images/item-01-01.png", "--k", "3", "--out", root_ + "/ret"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_.path() / "ret" / "retrieval.json");
  const json j = json::parse(in);
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(r.out.find("item-01-01\t"), std::string::npos);

  r = RunCli({"eval-retrieval", "--catalog", root_ + "/catalog/catalog.jsonl", "--index",
              root_ + "/index/index.bin", "--ks", "1,3", "--out", root_ + "/evr"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("precision@k"), std::string::npos);
}

TEST_F(PipelineTest, SegmentVanillaAndParallax) {
  Result r = RunCli({"segment", "--image", root_ + "/catalog/images/item-00-01.png", "--out",
                     root_ + "/seg"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(ReadMaskPng(dir_.path() / "seg" / "mask.png").none());

  r = RunCli({"train-vanilla", "--catalog", root_ + "/catalog/catalog.jsonl", "--steps", "2",
              "--out", root_ + "/vanilla"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"stage", "--mode", "vanilla", "--image", root_ + "/catalog/images/item-00-01.png",
              "--model", root_ + "/vanilla/vanilla.ckpt", "--out", root_ + "/vstage"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "vstage" / "staged.png"));

  r = RunCli({"train-inpaint", "--synthetic", "8", "--steps", "1", "--no-wbl", "--out",
              root_ + "/inpaint"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"parallax", "--image", root_ + "/vstage/staged.png", "--inpainter",
              root_ + "/inpaint/inpainter.ckpt", "--frames", "4", "--jobs", "2", "--out",
              root_ + "/px"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_.path() / "px" / "animation.json");
  const json j = json::parse(in);
  EXPECT_EQ(j.at("T"), 4);
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "px" / "frame_0003.png"));
}

TEST_F(PipelineTest, RerunIsByteIdentical) {
  for (const char* out : {"/a", "/b"}) {
    ASSERT_EQ(RunCli({"train-inpaint", "--synthetic", "8", "--steps", "2", "--out", root_ + out})
                  .code,
              0);
  }
  EXPECT_EQ(ReadBytes(dir_.path() / "a" / "inpainter.ckpt"),
            ReadBytes(dir_.path() / "b" / "inpainter.ckpt"));
  EXPECT_EQ(ReadBytes(dir_.path() / "a" / "inpaint_log.csv"),
            ReadBytes(dir_.path() / "b" / "inpaint_log.csv"));
}

TEST(Cli, StudyCreateAndReport) {
  TempDir dir;
  WritePng(dir.path() / "a.png", Uniform(4, 4, kWhite));
  const json spec = {{"name", "cli"},
                     {"pairs", {{{"image_a", (dir.path() / "a.png").string()},
                                 {"image_b", (dir.path() / "a.png").string()},
                                 {"method_a", "copy-paste"},
                                 {"method_b", "pix2pix"}}}}};
  WriteText(dir.path() / "spec.json", spec.dump());
  const std::string root = (dir.path() / "studies").string();
  Result r = RunCli({"study", "create", "--root", root, "--spec", (dir.path() / "spec.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "s0001\n");
  r = RunCli({"study", "report", "--root", root, "--study", "s0001"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0 complete, 1 incomplete"), std::string::npos);
  r = RunCli({"study", "report", "--root", root, "--study", "s0001", "--format", "json"});
  EXPECT_EQ(json::parse(r.out).at("incomplete_pairs"), 1);
  EXPECT_EQ(RunCli({"study", "report", "--root", root, "--study", "s0404"}).code, kExitRuntime);
}

TEST(RunConfig, LoadsEverySection) {
  TempDir dir;
  WriteText(dir.path() / "c.ini",
            "[run]\nseed = 7\njobs = 3\n"
            "[saliency]\nbackend = border-contrast\nthreshold = 0.6\n"
            "[retrieval]\nextractor = toy-histogram\nframe_size = 48\nk = 4\n"
            "[inpaint]\nsteps = 12\nuse_wbl = false\nlambda_boundary = 0.8\nband_width_d = 2\n"
            "[vanilla]\nsteps = 9\nl1_weight = 50\n"
            "[parallax]\nframes = 6\namplitude = 5\nbg_ratio = 0.2\noverscan = 8\n");
  const RunConfig c = LoadRunConfig(dir.path() / "c.ini");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.jobs, 3);
  EXPECT_EQ(c.saliency_threshold, 0.6);
  EXPECT_EQ(c.frame_size, 48);
  EXPECT_EQ(c.k, 4);
  EXPECT_EQ(c.inpaint_steps, 12);
  EXPECT_FALSE(c.use_wbl);
  EXPECT_EQ(c.weights.lambda_boundary, 0.8);
  EXPECT_EQ(c.weights.band_width_d, 2);
  EXPECT_EQ(c.vanilla_steps, 9);
  EXPECT_EQ(c.vanilla_l1_weight, 50.0);
  EXPECT_EQ(c.parallax.frames, 6);
  EXPECT_EQ(c.parallax.overscan, 8);
}

TEST(RunConfig, UnknownKeysAndBadValuesAreConfigurationErrors) {
  TempDir dir;
  WriteText(dir.path() / "a.ini", "[retrieval]\nkk = 3\n");
  EXPECT_EQ(ErrorCodeOf([&] { LoadRunConfig(dir.path() / "a.ini"); }), ErrorCode::kConfiguration);
  WriteText(dir.path() / "b.ini", "[retrieval]\nk = three\n");
  EXPECT_EQ(ErrorCodeOf([&] { LoadRunConfig(dir.path() / "b.ini"); }), ErrorCode::kConfiguration);
  WriteText(dir.path() / "c.ini", "[nosuch]\nx = 1\n");
  EXPECT_EQ(ErrorCodeOf([&] { LoadRunConfig(dir.path() / "c.ini"); }), ErrorCode::kConfiguration);
  EXPECT_TRUE(ErrorCodeOf([&] { LoadRunConfig(dir.path() / "missing.ini"); }).has_value());
}

TEST_F(PipelineTest, FlagsOverrideConfig) {
  WriteText(dir_.path() / "c.ini", "[retrieval]\nk = 4\n[run]\nseed = 9\n");
  const std::string cfg = root_ + "/c.ini";
  Result r = RunCli({"--config", cfg, "retrieve", "--index", root_ + "/index/index.bin", "--image",
                     root_ + "/catalog/images/item-01-01.png", "--out", root_ + "/r1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in1(dir_.path() / "r1" / "retrieval.json");
  EXPECT_EQ(json::parse(in1).size(), 4u);
  r = RunCli({"--config", cfg, "retrieve", "--index", root_ + "/index/index.bin", "--image",
              root_ + "/catalog/images/item-01-01.png", "--k", "1", "--out", root_ + "/r2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in2(dir_.path() / "r2" / "retrieval.json");
  EXPECT_EQ(json::parse(in2).size(), 1u);
  // Global flags may follow the subcommand.
  r = RunCli({"retrieve", "--config", cfg, "--index", root_ + "/index/index.bin", "--image",
              root_ + "/catalog/images/item-01-01.png", "--out", root_ + "/r3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in3(dir_.path() / "r3" / "retrieval.json");
  EXPECT_EQ(json::parse(in3).size(), 4u);
}

TEST(Cli, BadConfigFileIsRejected) {
  TempDir dir;
  WriteText(dir.path() / "bad.ini", "[retrieval]\nunknown = 1\n");
  const Result r = RunCli({"--config", (dir.path() / "bad.ini").string(), "stats"});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_NE(r.err.find("unknown"), std::string::npos);
}

}  // namespace
}  // namespace prodstage::cli
