// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyhub/catalog/dua.hpp"
#include "polyhub/islands/associative.hpp"
#include "polyhub/query/planner.hpp"

namespace polyhub::catalog {

/// Seconds since the unix epoch.
using Timestamp = std::int64_t;

Timestamp now();

struct Location {
    islands::IslandTag island = islands::IslandTag::REL;
    std::string engine;
    std::string object;

    bool operator==(const Location&) const = default;
};

struct DatasetEntry {
    std::string id;
    std::string name;
    std::string owner;
    std::vector<Location> locations;
    std::set<std::string> metatags;
    std::string checksum; // lowercase hex SHA-256 of the source bytes
    Timestamp created_at = 0;
    Timestamp updated_at = 0;
    bool stale = false;
    std::string notes;
    std::string source_path;

    bool operator==(const DatasetEntry&) const = default;
};

struct CrawlReport {
    std::size_t scanned_count = 0;
    std::vector<std::string> registered;
    std::vector<std::pair<std::string, std::string>> skipped; // (path, reason)
};

/// Dataset registry with metatag search, duplicate and staleness detection,
/// filesystem discovery and data-use-agreement records. Doubles as the
/// planner's object locator through the entries' locations.
class Catalog final : public query::ObjectLocator {
public:
    Catalog() = default;
    Catalog(const Catalog& other);
    Catalog& operator=(const Catalog& other);

    /// Throws Errc::duplicate_id or Errc::invalid_argument.
    std::string register_entry(DatasetEntry entry);
    /// Inserts or replaces by id; keeps the original created_at on replace.
    void upsert(DatasetEntry entry);
    std::optional<DatasetEntry> get(const std::string& id) const;
    std::vector<DatasetEntry> entries() const;
    std::size_t size() const;
    bool remove(const std::string& id);

    /// Ranked by (matching keywords desc, updated_at desc, id asc). A keyword
    /// matches when it equals a metatag or the name, case-insensitively.
    /// Entries matching nothing are dropped unless the keyword list is empty.
    std::vector<DatasetEntry> search(const std::vector<std::string>& keywords) const;

    /// Groups (size >= 2) of ids sharing a checksum, each sorted, groups
    /// ordered by their first id.
    std::vector<std::vector<std::string>> detect_duplicates() const;

    /// Sets stale = (now - updated_at > threshold) on every entry; returns how
    /// many are stale. threshold must be positive.
    std::size_t mark_stale(Timestamp now, std::int64_t threshold_seconds);

    /// Recursively registers .csv and .jsonl files under root.
    CrawlReport crawl(const std::filesystem::path& root);

    void add_agreement(DataUseAgreement agreement);
    std::vector<DataUseAgreement> agreements() const;

    std::vector<std::string> engines_holding(islands::IslandTag island, const std::string& object) const override;

    nlohmann::json to_json() const;
    static Catalog from_json(const nlohmann::json& doc);
    void save(const std::filesystem::path& path) const;
    static Catalog load(const std::filesystem::path& path);

private:
    static void validate(const DatasetEntry& entry);

    mutable std::shared_mutex mutex_;
    std::map<std::string, DatasetEntry> entries_;
    std::vector<DataUseAgreement> agreements_;
};

nlohmann::json entry_to_json(const DatasetEntry& entry);
DatasetEntry entry_from_json(const nlohmann::json& doc);

} // namespace polyhub::catalog
