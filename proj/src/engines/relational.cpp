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

#include "polyhub/engines/relational.hpp"

#include <mutex>
#include <optional>
#include <set>

#include "polyhub/engines/snapshot.hpp"

namespace polyhub::engines {

namespace {

constexpr std::uint8_t table_section = 1;

// Key of a row for uniqueness checks; rendered with its type so 1 and "1" differ.
std::string key_of(const Cell& cell)
{
    return std::to_string(cell.index()) + ":" + render_cell(cell);
}

void check_keys(const Relation& rel)
{
    auto key = rel.schema.key_index();
    if (!key) return;
    std::set<std::string> seen;
    for (const auto& row : rel.rows) {
        const auto& cell = row[*key];
        if (std::holds_alternative<std::monostate>(cell))
            throw Error(Errc::schema_violation, "null value in key column '" + *rel.schema.key_column() + "'");
        if (!seen.insert(key_of(cell)).second)
            throw Error(Errc::duplicate_key, "duplicate key " + render_cell(cell));
    }
}

void write_cell(snapshot::Writer& w, const Cell& cell)
{
    w.u8(static_cast<std::uint8_t>(cell.index()));
    switch (cell.index()) {
    case 0: break;
    case 1: w.str(std::get<std::string>(cell)); break;
    case 2: w.i64(std::get<std::int64_t>(cell)); break;
    case 3: w.f64(std::get<double>(cell)); break;
    }
}

Cell read_cell(snapshot::Reader& r)
{
    switch (r.u8()) {
    case 0: return std::monostate{};
    case 1: return r.str();
    case 2: return r.i64();
    case 3: return r.f64();
    default: throw Error(Errc::snapshot_error, "bad cell tag");
    }
}

} // namespace

CommitReport RelationalEngine::apply(const std::vector<TxnStatement>& txn)
{
    std::unique_lock lock(mutex_);

    // Staged copies of every table the txn touches; nullopt = dropped/absent.
    std::map<std::string, std::optional<Relation>> staged;
    auto lookup = [&](const std::string& name) -> std::optional<Relation>& {
        auto it = staged.find(name);
        if (it != staged.end()) return it->second;
        auto base = tables_.find(name);
        auto& slot = staged[name];
        if (base != tables_.end()) slot = base->second;
        return slot;
    };

    CommitReport report;
    for (std::size_t i = 0; i < txn.size(); ++i) {
        try {
            std::visit(
                [&](const auto& stmt) {
                    using T = std::decay_t<decltype(stmt)>;
                    if (stmt.table.empty()) throw Error(Errc::invalid_argument, "empty table name");
                    auto& slot = lookup(stmt.table);
                    if constexpr (std::is_same_v<T, CreateTable>) {
                        if (slot) throw Error(Errc::schema_violation, "table '" + stmt.table + "' already exists");
                        if (stmt.schema.size() == 0)
                            throw Error(Errc::schema_violation, "table '" + stmt.table + "' has no columns");
                        slot = Relation{stmt.schema, {}};
                    } else {
                        if (!slot) throw Error(Errc::unknown_table, "unknown table '" + stmt.table + "'");
                        if constexpr (std::is_same_v<T, Insert>) {
                            for (auto row : stmt.rows) {
                                conform_row(slot->schema, row);
                                slot->rows.push_back(std::move(row));
                            }
                            check_keys(*slot);
                            report.rows_affected += stmt.rows.size();
                        } else {
                            BoundPredicate pred(slot->schema, stmt.where, CompareMode::strict);
                            auto before = slot->rows.size();
                            std::erase_if(slot->rows, [&](const Row& row) { return pred.matches(row); });
                            report.rows_affected += before - slot->rows.size();
                        }
                    }
                },
                txn[i]);
        } catch (const TransactionError&) {
            throw;
        } catch (const Error& e) {
            throw TransactionError(e.code(), i, e.what());
        }
        ++report.statements;
    }

    for (auto& [name, rel] : staged) {
        if (rel) tables_[name] = std::move(*rel);
    }
    return report;
}

Relation RelationalEngine::select(const SelectQuery& query, CompareMode mode) const
{
    std::shared_lock lock(mutex_);
    auto it = tables_.find(query.table);
    if (it == tables_.end()) {
        it = temporaries_.find(query.table);
        if (it == temporaries_.end()) throw Error(Errc::unknown_table, "unknown table '" + query.table + "'");
    }
    return select_from(it->second, query, mode);
}

bool RelationalEngine::has_table(const std::string& table) const
{
    std::shared_lock lock(mutex_);
    return tables_.contains(table);
}

std::vector<std::string> RelationalEngine::table_names() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> names;
    for (const auto& [name, _] : tables_) names.push_back(name);
    return names;
}

std::size_t RelationalEngine::row_count(const std::string& table) const
{
    std::shared_lock lock(mutex_);
    auto it = tables_.find(table);
    if (it == tables_.end()) throw Error(Errc::unknown_table, "unknown table '" + table + "'");
    return it->second.rows.size();
}

std::map<std::string, Relation> RelationalEngine::tables() const
{
    std::shared_lock lock(mutex_);
    return tables_;
}

void RelationalEngine::attach_temporary(const std::string& name, Relation relation)
{
    std::unique_lock lock(mutex_);
    if (tables_.contains(name) || temporaries_.contains(name))
        throw Error(Errc::schema_violation, "table '" + name + "' already exists");
    temporaries_.emplace(name, std::move(relation));
}

void RelationalEngine::detach_temporary(const std::string& name)
{
    std::unique_lock lock(mutex_);
    temporaries_.erase(name);
}

void RelationalEngine::checkpoint(const std::filesystem::path& path) const
{
    snapshot::File file{id(), {}};
    {
        std::shared_lock lock(mutex_);
        for (const auto& [name, rel] : tables_) {
            snapshot::Writer w;
            w.str(name);
            const auto& cols = rel.schema.columns();
            w.u32(static_cast<std::uint32_t>(cols.size()));
            for (const auto& c : cols) {
                w.str(c.name);
                w.u8(static_cast<std::uint8_t>(c.type));
            }
            const auto& key = rel.schema.key_column();
            w.u8(key ? 1 : 0);
            if (key) w.str(*key);
            w.u64(rel.rows.size());
            for (const auto& row : rel.rows)
                for (const auto& cell : row) write_cell(w, cell);
            file.sections.push_back({table_section, w.bytes()});
        }
    }
    snapshot::write_file(path, file);
}

std::shared_ptr<RelationalEngine> RelationalEngine::restore(const std::filesystem::path& path)
{
    auto file = snapshot::read_file(path);
    if (file.engine.kind != EngineKind::relational)
        throw Error(Errc::snapshot_error, path.string() + " is not a relational snapshot");
    auto engine = std::make_shared<RelationalEngine>(file.engine.id);
    for (const auto& section : file.sections) {
        if (section.tag != table_section) throw Error(Errc::snapshot_error, "unknown relational section");
        snapshot::Reader r(section.payload);
        auto name = r.str();
        auto ncols = r.u32();
        std::vector<Column> cols;
        for (std::uint32_t i = 0; i < ncols; ++i) {
            auto cname = r.str();
            auto type = r.u8();
            if (type > 2) throw Error(Errc::snapshot_error, "bad column type");
            cols.push_back({std::move(cname), static_cast<ColumnType>(type)});
        }
        std::optional<std::string> key;
        if (r.u8()) key = r.str();
        Relation rel;
        try {
            rel.schema = Schema(std::move(cols), key);
        } catch (const Error& e) {
            throw Error(Errc::snapshot_error, std::string("corrupt schema: ") + e.what());
        }
        auto nrows = r.u64();
        for (std::uint64_t i = 0; i < nrows; ++i) {
            Row row;
            for (std::uint32_t c = 0; c < ncols; ++c) row.push_back(read_cell(r));
            rel.rows.push_back(std::move(row));
        }
        r.expect_done();
        engine->tables_.emplace(std::move(name), std::move(rel));
    }
    return engine;
}

} // namespace polyhub::engines
