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
#ifndef PRODSTAGE_CATALOG_H_
#define PRODSTAGE_CATALOG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prodstage {

// Serialized separator between category levels.
inline constexpr std::string_view kCategorySeparator = " > ";

using CategoryPath = std::vector<std::string>;

CategoryPath ParseCategory(std::string_view text);
std::string FormatCategory(const CategoryPath& path);

struct CatalogEntry {
  std::string id;
  // As written in the catalog file. Relative paths resolve against the
  // catalog's directory (see Catalog::ResolveImage).
  std::string image_path;
  CategoryPath category_path;
  bool staged = false;
  std::optional<int64_t> impressions;

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

class Catalog {
 public:
  Catalog() = default;
  // Throws kIntegrity on duplicate ids or empty category paths.
  explicit Catalog(std::vector<CatalogEntry> entries,
                   std::filesystem::path base_dir = {});

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const CatalogEntry* Find(std::string_view id) const;
  std::filesystem::path ResolveImage(const CatalogEntry& entry) const;
  const std::filesystem::path& base_dir() const { return base_dir_; }

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<CatalogEntry> entries_;
  std::filesystem::path base_dir_;
};

// JSONL: one object per line with keys id, image, category, staged and
// optional impressions. Blank lines are skipped.
Catalog IngestCatalog(const std::filesystem::path& path);
Catalog ParseCatalog(std::string_view jsonl,
                     std::filesystem::path base_dir = {});
std::string ExportCatalog(const Catalog& catalog);
void WriteCatalog(const std::filesystem::path& path, const Catalog& catalog);

struct CatalogFilter {
  std::optional<bool> staged;
  std::optional<std::string> top_category;
  std::optional<int64_t> min_impressions;
  std::optional<int> min_subcategory_count;
};

// Entries satisfying every provided predicate, in input order. An entry
// without an impression count fails a min_impressions predicate.
Catalog FilterCatalog(const Catalog& catalog, const CatalogFilter& filter);

struct CategoryCount {
  std::string prefix;  // joined with kCategorySeparator
  std::size_t count = 0;

  friend bool operator==(const CategoryCount&, const CategoryCount&) = default;
};

// Counts grouped by category path truncated to `depth` levels, sorted by
// count descending then prefix ascending.
std::vector<CategoryCount> CategoryStats(const Catalog& catalog, int depth);

}  // namespace prodstage

#endif  // PRODSTAGE_CATALOG_H_
