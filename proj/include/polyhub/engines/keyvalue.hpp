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
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "polyhub/engines/engine.hpp"
#include "polyhub/engines/visibility.hpp"

namespace polyhub::engines {

struct KvEntry {
    std::string row;
    std::string column;
    std::string visibility;
    std::uint64_t timestamp = 0;
    std::string value;

    bool operator==(const KvEntry&) const = default;
};

struct KvMutation {
    std::string row;
    std::string column;
    std::string visibility;
    std::string value;
};

/// Half-open [start, end) row range, byte-lexicographic.
struct RowRange {
    std::string start;
    std::string end;

    bool operator==(const RowRange&) const = default;
};

/// Sorted cell store with per-cell visibility labels. One version per
/// (row, column): a later put replaces the earlier cell.
class KeyValueEngine {
public:
    explicit KeyValueEngine(std::string id) : id_(std::move(id)) {}

    EngineId id() const { return {id_, EngineKind::keyvalue}; }

    /// No-op when the table already exists.
    void create_table(const std::string& table);
    /// Batch is validated up front and applied all-or-nothing. Creates the
    /// table on first write.
    std::size_t put(const std::string& table, const std::vector<KvMutation>& batch);
    std::vector<KvEntry> scan(const std::string& table, const std::optional<RowRange>& rows,
                              const std::optional<std::vector<std::string>>& columns,
                              const AuthSet& auths) const;

    bool has_table(const std::string& table) const;
    std::vector<std::string> table_names() const;
    std::size_t entry_count(const std::string& table) const;
    /// Unfiltered copy of every table, for state comparison and dumps.
    std::map<std::string, std::vector<KvEntry>> dump() const;

    void checkpoint(const std::filesystem::path& path) const;
    static std::shared_ptr<KeyValueEngine> restore(const std::filesystem::path& path);

private:
    struct StoredCell {
        std::string visibility;
        VisibilityExpr label;
        std::uint64_t timestamp;
        std::string value;
    };
    using Table = std::map<std::pair<std::string, std::string>, StoredCell>;

    std::string id_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Table> tables_;
    std::uint64_t next_timestamp_ = 1;
};

} // namespace polyhub::engines
