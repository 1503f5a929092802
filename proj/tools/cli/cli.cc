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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prodstage/catalog.h"
#include "prodstage/error.h"
#include "prodstage/evaluation.h"
#include "prodstage/humaneval.h"
#include "prodstage/humaneval_server.h"
#include "prodstage/inpainter.h"
#include "prodstage/parallax.h"
#include "prodstage/png_io.h"
#include "prodstage/retrieval.h"
#include "prodstage/saliency.h"
#include "prodstage/staging.h"
#include "prodstage/synthetic.h"
#include "run_config.h"

namespace prodstage::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Per-subcommand flag storage.
struct Flags {
  fs::path catalog;
  fs::path image;
  fs::path index;
  fs::path images;
  fs::path model;
  fs::path inpainter;
  fs::path real;
  fs::path gen;
  fs::path root;
  fs::path spec;
  std::string study;
  std::string mode = "copy-paste";
  std::string kind = "catalog";
  std::string format = "text";
  std::string host = "127.0.0.1";
  std::string ks = "1,3,5";
  std::string parallax_path;
  std::string top_category;
  int depth = 2;
  int port = 8080;
  int synthetic = 0;
  int count = 6;
  int subcategories = 4;
  int size = 64;
  int64_t min_impressions = -1;
  int min_subcategory_count = 0;
  bool staged_only = false;
  bool only_staged = false;
  bool only_unstaged = false;
};

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Image ReadNamedImage(const fs::path& path) {
  Image img = ReadPng(path);
  img.set_id(path.stem().string());
  return img;
}

std::vector<Image> ReadImageDir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    Fail(ErrorCode::kIo, dir.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Image> images;
  for (const fs::path& f : files) images.push_back(ReadNamedImage(f));
  return images;
}

Image FitToFrame(const Image& img, int size) {
  Image out = Canonicalize(img, size).first;
  out.set_id(img.id());
  return out;
}

std::unique_ptr<SaliencyBackend> SaliencyFrom(const RunConfig& c) {
  return MakeSaliencyBackend({c.saliency_backend, c.saliency_model});
}

std::unique_ptr<FeatureExtractor> ExtractorFrom(const RunConfig& c) {
  return MakeFeatureExtractor({c.extractor, c.extractor_model});
}

SaliencyConfig ThresholdFrom(const RunConfig& c) {
  return SaliencyConfig{c.saliency_threshold};
}

BinaryMask Segment(const Image& img, const SaliencyBackend& backend,
                   const RunConfig& c) {
  return Binarize(DetectSaliency(img, backend), ThresholdFrom(c));
}

InpainterConfig InpainterConfigFrom(const RunConfig& c) {
  InpainterConfig ic;
  ic.resolution = c.inpaint_resolution;
  ic.base_channels = c.inpaint_base_channels;
  ic.batch_size = c.inpaint_batch_size;
  ic.weights = c.weights;
  ic.use_wbl = c.use_wbl;
  ic.seed = c.seed;
  return ic;
}

void Require(const fs::path& value, const char* flag) {
  if (value.empty()) {
    throw CLI::RequiredError(std::string(flag));
  }
}

// ---------------------------------------------------------------------------
// Subcommands.

void CmdIngest(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.catalog, "--catalog");
  const Catalog raw = IngestCatalog(f.catalog);
  CatalogFilter filter;
  if (f.only_staged) filter.staged = true;
  if (f.only_unstaged) filter.staged = false;
  if (!f.top_category.empty()) filter.top_category = f.top_category;
  if (f.min_impressions >= 0) filter.min_impressions = f.min_impressions;
  if (f.min_subcategory_count > 0) {
    filter.min_subcategory_count = f.min_subcategory_count;
  }
  const Catalog filtered = FilterCatalog(raw, filter);
  // Rewrite image paths so the copy resolves from its new location.
  std::vector<CatalogEntry> entries = filtered.entries();
  for (CatalogEntry& e : entries) {
    e.image_path = fs::absolute(filtered.ResolveImage(e)).lexically_normal().string();
  }
  EnsureDir(c.out);
  WriteCatalog(c.out / "catalog.jsonl", Catalog(std::move(entries), c.out));
  const auto staged = std::count_if(
      filtered.entries().begin(), filtered.entries().end(),
      [](const CatalogEntry& e) { return e.staged; });
  out << "ingested " << raw.size() << " entries, kept " << filtered.size()
      << " (" << staged << " staged)\n";
}

void CmdStats(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.catalog, "--catalog");
  const Catalog catalog = IngestCatalog(f.catalog);
  const std::vector<CategoryCount> counts = CategoryStats(catalog, f.depth);
  ojson j = ojson::array();
  for (const CategoryCount& cc : counts) {
    out << cc.count << '\t' << cc.prefix << '\n';
    j.push_back({{"prefix", cc.prefix}, {"count", cc.count}});
  }
  EnsureDir(c.out);
  WriteText(c.out / "stats.json", j.dump(2) + "\n");
}

void CmdSegment(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.image, "--image");
  const Image img = ReadNamedImage(f.image);
  const auto backend = SaliencyFrom(c);
  const BinaryMask mask = Segment(img, *backend, c);
  EnsureDir(c.out);
  WriteMaskPng(c.out / "mask.png", mask);
  WritePng(c.out / "cutout.png", SegmentProduct(img, mask, kWhite));
  out << "mask pixels: " << mask.count() << " of " << mask.size() << '\n';
}

void CmdIndex(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.catalog, "--catalog");
  const Catalog catalog = IngestCatalog(f.catalog);
  const auto backend = SaliencyFrom(c);
  const auto fx = ExtractorFrom(c);
  const RetrievalIndex index =
      BuildIndex(catalog, *fx, *backend, {c.frame_size, ThresholdFrom(c)});
  EnsureDir(c.out);
  index.Save(c.out / "index.bin");
  out << "indexed " << index.size() << " items (" << index.extractor_name()
      << ", D=" << index.dim() << ")\n";
}

void CmdRetrieve(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.index, "--index");
  Require(f.image, "--image");
  if (f.staged_only) Require(f.catalog, "--catalog");
  const RetrievalIndex index = RetrievalIndex::Load(f.index);
  std::optional<Catalog> catalog;
  if (!f.catalog.empty()) catalog = IngestCatalog(f.catalog);
  const auto backend = SaliencyFrom(c);
  const auto fx = ExtractorFrom(c);
  const Image img = FitToFrame(ReadNamedImage(f.image), c.frame_size);
  const BinaryMask mask = Segment(img, *backend, c);
  const EmbeddingVector query = Embed(img, *fx, mask.none() ? nullptr : &mask);
  std::function<bool(const IndexItem&)> eligible;
  if (f.staged_only) {
    eligible = [&](const IndexItem& item) {
      const CatalogEntry* e = catalog->Find(item.id);
      return e != nullptr && e->staged;
    };
  }
  ojson j = ojson::array();
  for (const RetrievalResult& r : index.TopK(query, c.k, eligible)) {
    const IndexItem* item = index.Find(r.id);
    out << r.id << '\t' << Num(r.distance) << '\n';
    j.push_back({{"id", r.id},
                 {"distance", r.distance},
                 {"category", FormatCategory(item->category_path)}});
  }
  EnsureDir(c.out);
  WriteText(c.out / "retrieval.json", j.dump(2) + "\n");
}

void CmdTrainInpaint(const RunConfig& c, const Flags& f, std::ostream& out) {
  std::vector<Image> images;
  if (f.synthetic > 0) {
    images = MakeShapeScenes(f.synthetic, c.inpaint_resolution, c.seed);
  } else {
    Require(f.images, "--images or --synthetic");
    for (const Image& img : ReadImageDir(f.images)) {
      images.push_back(FitToFrame(img, c.inpaint_resolution));
    }
  }
  std::vector<InpaintStepLog> log;
  InpaintTrainOptions options{InpainterConfigFrom(c), &log};
  const InpainterModel model = TrainInpainter(images, c.weights, c.inpaint_steps,
                                              c.seed, c.use_wbl, options);
  EnsureDir(c.out);
  model.Save(c.out / "inpainter.ckpt");
  std::ostringstream csv;
  csv << "step,wbl,edge_l1,edge_adv,edge_fm,edge_disc,completion_l1,"
         "completion_adv,completion_disc\n";
  for (const InpaintStepLog& s : log) {
    csv << s.step << ',' << Num(s.wbl) << ',' << Num(s.edge_l1) << ','
        << Num(s.edge_adv) << ',' << Num(s.edge_fm) << ',' << Num(s.edge_disc)
        << ',' << Num(s.completion_l1) << ',' << Num(s.completion_adv) << ','
        << Num(s.completion_disc) << '\n';
  }
  WriteText(c.out / "inpaint_log.csv", csv.str());
  out << "trained inpainter on " << images.size() << " images for "
      << c.inpaint_steps << " steps (" << (c.use_wbl ? "WBL" : "plain L1")
      << ")\n";
}

void CmdTrainVanilla(const RunConfig& c, const Flags& f, std::ostream& out,
                     std::ostream& err) {
  Require(f.catalog, "--catalog");
  const Catalog catalog = IngestCatalog(f.catalog);
  const auto backend = SaliencyFrom(c);
  const VanillaPairSet set =
      MakeVanillaPairs(catalog, *backend, {c.frame_size, ThresholdFrom(c)});
  for (const SkipRecord& s : set.skipped) {
    err << "warning: skipped " << s.id << ": " << s.reason << '\n';
  }
  std::vector<VanillaStepLog> log;
  VanillaTrainOptions options;
  options.config.l1_weight = c.vanilla_l1_weight;
  options.log = &log;
  const VanillaModel model =
      TrainVanilla(set.pairs, c.vanilla_steps, c.seed, options);
  EnsureDir(c.out);
  model.Save(c.out / "vanilla.ckpt");
  std::ostringstream csv;
  csv << "step,l1,adversarial,discriminator\n";
  for (const VanillaStepLog& s : log) {
    csv << s.step << ',' << Num(s.l1) << ',' << Num(s.adversarial) << ','
        << Num(s.discriminator) << '\n';
  }
  WriteText(c.out / "vanilla_log.csv", csv.str());
  out << "trained vanilla model on " << set.pairs.size() << " pairs for "
      << c.vanilla_steps << " steps\n";
}

void CmdStage(const RunConfig& c, const Flags& f, std::ostream& out,
              std::ostream& err) {
  Require(f.image, "--image");
  const auto backend = SaliencyFrom(c);
  EnsureDir(c.out);
  if (f.mode == "vanilla") {
    Require(f.model, "--model");
    const VanillaModel model = VanillaModel::Load(f.model);
    const Image img = FitToFrame(ReadNamedImage(f.image), model.resolution());
    const BinaryMask mask = Segment(img, *backend, c);
    if (mask.none()) Fail(ErrorCode::kEmptyMask, "no product found in input");
    const Image cutout = SegmentProduct(img, mask, kWhite);
    WritePng(c.out / "staged.png", StageVanilla(model, cutout, mask));
    out << "wrote " << (c.out / "staged.png").string() << '\n';
    return;
  }
  Require(f.inpainter, "--inpainter");
  Require(f.index, "--index");
  Require(f.catalog, "--catalog");
  const InpainterModel inpainter = InpainterModel::Load(f.inpainter);
  const RetrievalIndex index = RetrievalIndex::Load(f.index);
  const Catalog catalog = IngestCatalog(f.catalog);
  const auto fx = ExtractorFrom(c);
  const Image img = ReadNamedImage(f.image);
  const StagingOutput result =
      StageFromCatalog(img, index, catalog, c.k, inpainter, *backend, *fx,
                       {inpainter.resolution(), ThresholdFrom(c)});
  for (const SkipRecord& s : result.skipped) {
    err << "warning: skipped donor " << s.id << ": " << s.reason << '\n';
  }
  WriteStagingResults(c.out, "stage", result.results);
  for (const CompositeResult& r : result.results) {
    out << r.donor_id << '\t' << Num(r.distance) << '\n';
  }
}

void CmdParallax(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.image, "--image");
  Require(f.inpainter, "--inpainter");
  ParallaxConfig pc = c.parallax;
  if (!f.parallax_path.empty()) pc.path = ParseParallaxPath(f.parallax_path);
  pc.Validate();
  const InpainterModel inpainter = InpainterModel::Load(f.inpainter);
  const auto backend = SaliencyFrom(c);
  const Image img = FitToFrame(ReadNamedImage(f.image), inpainter.resolution());
  const BinaryMask mask = Segment(img, *backend, c);
  const Image plate = MakeCleanPlate(img, mask, inpainter);

  FrameSequence seq;
  seq.frames.resize(pc.frames);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int t = next++; t < pc.frames; t = next++) {
      seq.frames[t] = RenderFrame(img, mask, plate, pc, t);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < std::max(1, c.jobs); ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (int t = 0; t < pc.frames; ++t) {
    const int dx = ForegroundShift(pc, t);
    seq.foreground_dx.push_back(dx);
    seq.background_dx.push_back(BackgroundShift(pc, dx));
  }
  PngSequenceEncoder().Encode(seq, pc, c.out);
  WritePng(c.out / "plate.png", plate);
  out << "rendered " << pc.frames << " frames\n";
}

void CmdEvalFid(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.real, "--real");
  Require(f.gen, "--gen");
  const auto fx = ExtractorFrom(c);
  const FidReport report =
      FidBetweenSets(ReadImageDir(f.real), ReadImageDir(f.gen), *fx);
  EnsureDir(c.out);
  WriteText(c.out / "fid.json", FidReportJson(report));
  out << "fid " << Num(report.fid) << " (" << report.extractor << ", "
      << report.n_real << " real, " << report.n_gen << " generated)\n";
}

std::vector<int> ParseKs(const std::string& text) {
  std::vector<int> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ks.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--ks", "expected a comma separated list");
    }
  }
  return ks;
}

void CmdEvalRetrieval(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.catalog, "--catalog");
  Require(f.index, "--index");
  const std::vector<int> ks = ParseKs(f.ks);
  const Catalog catalog = IngestCatalog(f.catalog);
  const RetrievalIndex index = RetrievalIndex::Load(f.index);
  // Each indexed item is a query against the rest of the index.
  std::vector<LabeledQuery> queries;
  for (const IndexItem& item : index.items()) {
    if (catalog.Find(item.id) == nullptr) continue;
    queries.push_back({{item.values, item.id}, item.category_path});
  }
  const RetrievalMetrics metrics = EvalRetrieval(index, queries, ks);
  EnsureDir(c.out);
  WriteText(c.out / "retrieval_metrics.json", RetrievalMetricsJson(metrics));
  out << FormatRetrievalTable(metrics);
}

void CmdStudyServe(const Flags& f, std::ostream& out) {
  Require(f.root, "--root");
  StudyStore store(f.root);
  HumanEvalServer server(store);
  const int port = server.Bind(f.host, f.port);
  if (port < 0) {
    Fail(ErrorCode::kIo, "cannot bind " + f.host + ":" + std::to_string(f.port));
  }
  out << "serving " << store.ListStudies().size() << " studies on http://"
      << f.host << ":" << port << std::endl;
  server.ListenAfterBind();
}

void CmdStudyCreate(const RunConfig& c, const Flags& f, std::ostream& out) {
  Require(f.root, "--root");
  Require(f.spec, "--spec");
  std::ifstream in(f.spec, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + f.spec.string());
  std::stringstream text;
  text << in.rdbuf();
  StudySpec spec = ParseStudySpecJson(text.str());
  spec.seed = c.seed;
  StudyStore store(f.root);
  const Study study = store.CreateStudy(spec);
  out << study.study_id << '\n';
}

void CmdStudyReport(const Flags& f, std::ostream& out) {
  Require(f.root, "--root");
  if (f.study.empty()) throw CLI::RequiredError("--study");
  StudyStore store(f.root);
  const StudyReport report = store.Report(f.study);
  if (f.format == "json") {
    out << StudyReportJson(report);
    return;
  }
  for (const std::string& line : SummaryLines(report)) out << line << '\n';
  out << report.complete_pairs << " complete, " << report.incomplete_pairs
      << " incomplete\n";
}

void CmdSynth(const RunConfig& c, const Flags& f, std::ostream& out) {
  EnsureDir(c.out);
  if (f.kind == "catalog") {
    SyntheticCatalogOptions o;
    o.subcategories = f.subcategories;
    o.per_subcategory = f.count;
    o.size = f.size;
    o.seed = c.seed;
    const Catalog catalog = WriteSyntheticCatalog(c.out, o);
    out << "wrote " << catalog.size() << " catalog entries\n";
    return;
  }
  const std::vector<Image> scenes = MakeShapeScenes(f.count, f.size, c.seed);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%04zu.png", i);
    WritePng(c.out / name, scenes[i]);
  }
  out << "wrote " << scenes.size() << " scenes\n";
}

// --config must be known before the other options are bound, so it is
// looked up ahead of the real parse.
std::optional<fs::path> FindConfigFlag(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig c;
  try {
    if (const auto path = FindConfigFlag(args)) c = LoadRunConfig(*path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  Flags f;
  std::string config_path;

  CLI::App app{"Product staging pipeline: catalog, retrieval, inpainting, "
               "staging, parallax, evaluation and human studies",
               "prodstage"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", config_path, "INI file, one section per module");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--seed", c.seed, "Seed for every random choice (default 42)");
  app.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--saliency", c.saliency_backend,
                 "Saliency backend (border-contrast, u2net)");
  app.add_option("--saliency-model", c.saliency_model, "ONNX model for u2net");
  app.add_option("--threshold", c.saliency_threshold, "Saliency threshold");
  app.add_option("--extractor", c.extractor,
                 "Feature extractor (toy-histogram, inception-v3)");
  app.add_option("--extractor-model", c.extractor_model,
                 "ONNX model for inception-v3");
  app.add_option("--frame-size", c.frame_size, "Canonical frame size");

  auto* ingest = app.add_subcommand("ingest", "Validate and filter a catalog");
  ingest->add_option("--catalog", f.catalog, "Catalog JSONL");
  ingest->add_flag("--staged", f.only_staged, "Keep staged entries only");
  ingest->add_flag("--unstaged", f.only_unstaged, "Keep unstaged entries only");
  ingest->add_option("--top-category", f.top_category, "Top-level category");
  ingest->add_option("--min-impressions", f.min_impressions);
  ingest->add_option("--min-subcategory-count", f.min_subcategory_count);

  auto* stats = app.add_subcommand("stats", "Category counts");
  stats->add_option("--catalog", f.catalog, "Catalog JSONL");
  stats->add_option("--depth", f.depth, "Category depth");

  auto* segment = app.add_subcommand("segment", "Product mask and cutout");
  segment->add_option("--image", f.image, "Input PNG");

  auto* index = app.add_subcommand("index", "Build a retrieval index");
  index->add_option("--catalog", f.catalog, "Catalog JSONL");

  auto* retrieve = app.add_subcommand("retrieve", "Nearest catalog items");
  retrieve->add_option("--index", f.index, "Index file");
  retrieve->add_option("--image", f.image, "Query PNG");
  retrieve->add_option("--catalog", f.catalog, "Catalog JSONL");
  retrieve->add_option("--k", c.k, "Neighbours")->check(CLI::PositiveNumber);
  retrieve->add_flag("--staged-only", f.staged_only, "Only staged neighbours");

  auto* train_inpaint = app.add_subcommand("train-inpaint", "Train the inpainter");
  train_inpaint->add_option("--images", f.images, "Directory of PNG images");
  train_inpaint->add_option("--synthetic", f.synthetic,
                            "Train on N generated shape scenes");
  train_inpaint->add_option("--steps", c.inpaint_steps)->check(CLI::PositiveNumber);
  train_inpaint->add_option("--size", c.inpaint_resolution, "Model resolution");
  train_inpaint->add_flag("--wbl,!--no-wbl", c.use_wbl,
                          "Weighted boundary loss on edges");
  train_inpaint->add_option("--lambda-boundary", c.weights.lambda_boundary);
  train_inpaint->add_option("--lambda-non-boundary",
                            c.weights.lambda_non_boundary);
  train_inpaint->add_option("--band-width", c.weights.band_width_d);

  auto* train_vanilla =
      app.add_subcommand("train-vanilla", "Train the vanilla staging model");
  train_vanilla->add_option("--catalog", f.catalog, "Catalog JSONL");
  train_vanilla->add_option("--steps", c.vanilla_steps)->check(CLI::PositiveNumber);
  train_vanilla->add_option("--l1-weight", c.vanilla_l1_weight);

  auto* stage = app.add_subcommand("stage", "Stage a product image");
  stage->add_option("--mode", f.mode, "vanilla or copy-paste")
      ->check(CLI::IsMember({"vanilla", "copy-paste"}));
  stage->add_option("--image", f.image, "Product PNG");
  stage->add_option("--model", f.model, "Vanilla checkpoint");
  stage->add_option("--inpainter", f.inpainter, "Inpainter checkpoint");
  stage->add_option("--index", f.index, "Index file");
  stage->add_option("--catalog", f.catalog, "Catalog JSONL");
  stage->add_option("--k", c.k, "Donors")->check(CLI::PositiveNumber);

  auto* parallax = app.add_subcommand("parallax", "Render a parallax animation");
  parallax->add_option("--image", f.image, "Staged PNG");
  parallax->add_option("--inpainter", f.inpainter, "Inpainter checkpoint");
  parallax->add_option("--frames", c.parallax.frames);
  parallax->add_option("--amplitude", c.parallax.amplitude);
  parallax->add_option("--bg-ratio", c.parallax.bg_ratio);
  parallax->add_option("--overscan", c.parallax.overscan);
  parallax->add_option("--path", f.parallax_path, "Motion path");

  auto* eval_fid = app.add_subcommand("eval-fid", "FID between two image sets");
  eval_fid->add_option("--real", f.real, "Directory of real PNGs");
  eval_fid->add_option("--gen", f.gen, "Directory of generated PNGs");

  auto* eval_retrieval =
      app.add_subcommand("eval-retrieval", "Precision and recall at k");
  eval_retrieval->add_option("--catalog", f.catalog, "Catalog JSONL");
  eval_retrieval->add_option("--index", f.index, "Index file");
  eval_retrieval->add_option("--ks", f.ks, "Comma separated k values");

  auto* study = app.add_subcommand("study", "Human evaluation studies");
  study->require_subcommand(1);
  auto* serve = study->add_subcommand("serve", "Run the study HTTP service");
  serve->add_option("--root", f.root, "Study directory");
  serve->add_option("--host", f.host);
  serve->add_option("--port", f.port);
  auto* create = study->add_subcommand("create", "Create a study from a spec");
  create->add_option("--root", f.root, "Study directory");
  create->add_option("--spec", f.spec, "Study spec JSON");
  auto* report = study->add_subcommand("report", "Majority-vote report");
  report->add_option("--root", f.root, "Study directory");
  report->add_option("--study", f.study, "Study id");
  report->add_option("--format", f.format)
      ->check(CLI::IsMember({"text", "json"}));

  auto* synth = app.add_subcommand("synth", "Generate fixture data");
  synth->add_option("--kind", f.kind, "catalog or scenes")
      ->check(CLI::IsMember({"catalog", "scenes"}));
  synth->add_option("--count", f.count, "Items per subcategory, or scenes");
  synth->add_option("--subcategories", f.subcategories);
  synth->add_option("--size", f.size, "Image size");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) CmdIngest(c, f, out);
    else if (stats->parsed()) CmdStats(c, f, out);
    else if (segment->parsed()) CmdSegment(c, f, out);
    else if (index->parsed()) CmdIndex(c, f, out);
    else if (retrieve->parsed()) CmdRetrieve(c, f, out);
    else if (train_inpaint->parsed()) CmdTrainInpaint(c, f, out);
    else if (train_vanilla->parsed()) CmdTrainVanilla(c, f, out, err);
    else if (stage->parsed()) CmdStage(c, f, out, err);
    else if (parallax->parsed()) CmdParallax(c, f, out);
    else if (eval_fid->parsed()) CmdEvalFid(c, f, out);
    else if (eval_retrieval->parsed()) CmdEvalRetrieval(c, f, out);
    else if (serve->parsed()) CmdStudyServe(f, out);
    else if (create->parsed()) CmdStudyCreate(c, f, out);
    else if (report->parsed()) CmdStudyReport(f, out);
    else if (synth->parsed()) CmdSynth(c, f, out);
  } catch (const CLI::ParseError& e) {
    err << "error: missing or invalid " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace prodstage::cli
