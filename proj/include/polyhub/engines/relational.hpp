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

#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "polyhub/engines/engine.hpp"
#include "polyhub/engines/relation.hpp"
#include "polyhub/error.hpp"

namespace polyhub::engines {

struct CreateTable {
    std::string table;
    Schema schema;
};

struct Insert {
    std::string table;
    std::vector<Row> rows;
};

struct Delete {
    std::string table;
    Predicate where;
};

using TxnStatement = std::variant<CreateTable, Insert, Delete>;

struct CommitReport {
    std::size_t statements = 0;
    std::size_t rows_affected = 0;
};

/// Raised when a transaction rolls back. `statement_index()` is the zero-based
/// position of the first failing statement; code() carries the cause.
class TransactionError : public Error {
public:
    TransactionError(Errc code, std::size_t statement_index, const std::string& message)
        : Error(code, "statement " + std::to_string(statement_index) + ": " + message),
          statement_index_(statement_index) {}

    std::size_t statement_index() const noexcept { return statement_index_; }

private:
    std::size_t statement_index_;
};

/// In-memory transactional table store.
///
/// Writers are serialized by an exclusive lock and stage their changes on
/// copies of the touched tables; the copies are swapped in only after every
/// statement succeeds. Readers take a shared lock, so a read never observes a
/// partially applied transaction.
class RelationalEngine {
public:
    explicit RelationalEngine(std::string id) : id_(std::move(id)) {}

    EngineId id() const { return {id_, EngineKind::relational}; }

    CommitReport apply(const std::vector<TxnStatement>& txn);
    Relation select(const SelectQuery& query, CompareMode mode = CompareMode::strict) const;

    bool has_table(const std::string& table) const;
    std::vector<std::string> table_names() const;
    std::size_t row_count(const std::string& table) const;
    /// Copy of every base table, for state comparison and dumps.
    std::map<std::string, Relation> tables() const;

    /// Scratch tables hold materialized cast results for the duration of one
    /// query. They shadow nothing, are never persisted, and are not visible in
    /// table_names().
    void attach_temporary(const std::string& name, Relation relation);
    void detach_temporary(const std::string& name);

    void checkpoint(const std::filesystem::path& path) const;
    static std::shared_ptr<RelationalEngine> restore(const std::filesystem::path& path);

private:
    std::string id_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Relation> tables_;
    std::map<std::string, Relation> temporaries_;
};

} // namespace polyhub::engines
