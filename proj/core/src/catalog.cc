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
#include "prodstage/catalog.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prodstage/error.h"

namespace prodstage {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void ParseError(std::size_t line, const std::string& what) {
  Fail(ErrorCode::kParse,
       "catalog line " + std::to_string(line) + ": " + what);
}

CatalogEntry ParseEntry(const std::string& text, std::size_t line) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    ParseError(line, e.what());
  }
  if (!j.is_object()) ParseError(line, "expected a JSON object");
  CatalogEntry entry;
  auto require = [&](const char* key) -> const OrderedJson& {
    auto it = j.find(key);
    if (it == j.end()) ParseError(line, std::string("missing key \"") + key + "\"");
    return *it;
  };
  const OrderedJson& id = require("id");
  const OrderedJson& image = require("image");
  const OrderedJson& category = require("category");
  const OrderedJson& staged = require("staged");
  if (!id.is_string()) ParseError(line, "\"id\" must be a string");
  if (!image.is_string()) ParseError(line, "\"image\" must be a string");
  if (!category.is_string()) ParseError(line, "\"category\" must be a string");
  if (!staged.is_boolean()) ParseError(line, "\"staged\" must be a boolean");
  entry.id = id.get<std::string>();
  entry.image_path = image.get<std::string>();
  entry.category_path = ParseCategory(category.get<std::string>());
  entry.staged = staged.get<bool>();
  if (auto it = j.find("impressions"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<int64_t>() < 0) {
      ParseError(line, "\"impressions\" must be a non-negative integer");
    }
    entry.impressions = it->get<int64_t>();
  }
  if (entry.id.empty()) ParseError(line, "\"id\" must be non-empty");
  if (entry.category_path.empty()) ParseError(line, "\"category\" is empty");
  return entry;
}

}  // namespace

CategoryPath ParseCategory(std::string_view text) {
  CategoryPath path;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find('>', start);
    const std::string level = Trim(text.substr(
        start, pos == std::string_view::npos ? std::string_view::npos
                                             : pos - start));
    if (!level.empty()) path.push_back(level);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return path;
}

std::string FormatCategory(const CategoryPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += kCategorySeparator;
    out += path[i];
  }
  return out;
}

Catalog::Catalog(std::vector<CatalogEntry> entries,
                 std::filesystem::path base_dir)
    : entries_(std::move(entries)), base_dir_(std::move(base_dir)) {
  std::set<std::string_view> seen;
  for (const CatalogEntry& e : entries_) {
    if (!seen.insert(e.id).second) {
      Fail(ErrorCode::kIntegrity, "duplicate catalog id \"" + e.id + "\"");
    }
    if (e.category_path.empty()) {
      Fail(ErrorCode::kIntegrity, "entry \"" + e.id + "\" has no category");
    }
  }
}

const CatalogEntry* Catalog::Find(std::string_view id) const {
  for (const CatalogEntry& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::filesystem::path Catalog::ResolveImage(const CatalogEntry& entry) const {
  std::filesystem::path p(entry.image_path);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

Catalog ParseCatalog(std::string_view jsonl, std::filesystem::path base_dir) {
  std::vector<CatalogEntry> entries;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    ++line_no;
    const std::string line = Trim(jsonl.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    CatalogEntry entry = ParseEntry(line, line_no);
    if (!ids.insert(entry.id).second) {
      Fail(ErrorCode::kIntegrity, "catalog line " + std::to_string(line_no) +
                                      ": duplicate id \"" + entry.id + "\"");
    }
    entries.push_back(std::move(entry));
  }
  return Catalog(std::move(entries), std::move(base_dir));
}

Catalog IngestCatalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open catalog " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCatalog(buffer.str(), path.parent_path());
}

std::string ExportCatalog(const Catalog& catalog) {
  std::string out;
  for (const CatalogEntry& e : catalog.entries()) {
    OrderedJson j;
    j["id"] = e.id;
    j["image"] = e.image_path;
    j["category"] = FormatCategory(e.category_path);
    j["staged"] = e.staged;
    if (e.impressions) j["impressions"] = *e.impressions;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void WriteCatalog(const std::filesystem::path& path, const Catalog& catalog) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write catalog " + path.string());
  out << ExportCatalog(catalog);
}

Catalog FilterCatalog(const Catalog& catalog, const CatalogFilter& filter) {
  std::map<CategoryPath, std::size_t> counts;
  if (filter.min_subcategory_count) {
    for (const CatalogEntry& e : catalog.entries()) ++counts[e.category_path];
  }
  std::vector<CatalogEntry> kept;
  for (const CatalogEntry& e : catalog.entries()) {
    if (filter.staged && e.staged != *filter.staged) continue;
    if (filter.top_category && e.category_path.front() != *filter.top_category) {
      continue;
    }
    if (filter.min_impressions &&
        (!e.impressions || *e.impressions < *filter.min_impressions)) {
      continue;
    }
    if (filter.min_subcategory_count &&
        counts[e.category_path] <
            static_cast<std::size_t>(*filter.min_subcategory_count)) {
      continue;
    }
    kept.push_back(e);
  }
  return Catalog(std::move(kept), catalog.base_dir());
}

std::vector<CategoryCount> CategoryStats(const Catalog& catalog, int depth) {
  if (depth < 1) Fail(ErrorCode::kInvalidInput, "CategoryStats: depth < 1");
  std::map<std::string, std::size_t> counts;
  for (const CatalogEntry& e : catalog.entries()) {
    const std::size_t n =
        std::min(e.category_path.size(), static_cast<std::size_t>(depth));
    CategoryPath prefix(e.category_path.begin(), e.category_path.begin() + n);
    ++counts[FormatCategory(prefix)];
  }
  std::vector<CategoryCount> out;
  out.reserve(counts.size());
  for (auto& [prefix, count] : counts) out.push_back({prefix, count});
  std::stable_sort(out.begin(), out.end(),
                   [](const CategoryCount& a, const CategoryCount& b) {
                     return a.count > b.count;
                   });
  return out;
}

}  // namespace prodstage
