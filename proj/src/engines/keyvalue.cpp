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

#include "polyhub/engines/keyvalue.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "polyhub/engines/snapshot.hpp"
#include "polyhub/error.hpp"

namespace polyhub::engines {

namespace {

constexpr std::uint8_t meta_section = 1;
constexpr std::uint8_t table_section = 2;

} // namespace

void KeyValueEngine::create_table(const std::string& table)
{
    if (table.empty()) throw Error(Errc::invalid_argument, "empty table name");
    std::unique_lock lock(mutex_);
    tables_.try_emplace(table);
}

std::size_t KeyValueEngine::put(const std::string& table, const std::vector<KvMutation>& batch)
{
    if (table.empty()) throw Error(Errc::invalid_argument, "empty table name");
    std::vector<VisibilityExpr> labels;
    labels.reserve(batch.size());
    for (const auto& m : batch) {
        if (m.row.empty() || m.column.empty())
            throw Error(Errc::invalid_argument, "row and column must be non-empty");
        labels.push_back(VisibilityExpr::parse(m.visibility));
    }

    std::unique_lock lock(mutex_);
    auto& t = tables_[table];
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& m = batch[i];
        t.insert_or_assign({m.row, m.column},
                           StoredCell{m.visibility, std::move(labels[i]), next_timestamp_++, m.value});
    }
    return batch.size();
}

std::vector<KvEntry> KeyValueEngine::scan(const std::string& table, const std::optional<RowRange>& rows,
                                          const std::optional<std::vector<std::string>>& columns,
                                          const AuthSet& auths) const
{
    if (rows && rows->start > rows->end)
        throw Error(Errc::invalid_argument, "row range start '" + rows->start + "' is after end '" + rows->end + "'");
    std::optional<std::set<std::string_view>> wanted;
    if (columns) wanted.emplace(columns->begin(), columns->end());

    std::shared_lock lock(mutex_);
    auto it = tables_.find(table);
    if (it == tables_.end()) throw Error(Errc::unknown_table, "unknown table '" + table + "'");
    const auto& t = it->second;

    auto first = rows ? t.lower_bound({rows->start, std::string()}) : t.begin();
    std::vector<KvEntry> out;
    for (auto cell = first; cell != t.end(); ++cell) {
        const auto& [key, stored] = *cell;
        if (rows && key.first >= rows->end) break;
        if (wanted && !wanted->contains(key.second)) continue;
        if (!stored.label.evaluate(auths)) continue;
        out.push_back({key.first, key.second, stored.visibility, stored.timestamp, stored.value});
    }
    return out;
}

bool KeyValueEngine::has_table(const std::string& table) const
{
    std::shared_lock lock(mutex_);
    return tables_.contains(table);
}

std::vector<std::string> KeyValueEngine::table_names() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> names;
    for (const auto& [name, _] : tables_) names.push_back(name);
    return names;
}

std::size_t KeyValueEngine::entry_count(const std::string& table) const
{
    std::shared_lock lock(mutex_);
    auto it = tables_.find(table);
    if (it == tables_.end()) throw Error(Errc::unknown_table, "unknown table '" + table + "'");
    return it->second.size();
}

std::map<std::string, std::vector<KvEntry>> KeyValueEngine::dump() const
{
    std::shared_lock lock(mutex_);
    std::map<std::string, std::vector<KvEntry>> out;
    for (const auto& [name, t] : tables_) {
        auto& entries = out[name];
        for (const auto& [key, cell] : t)
            entries.push_back({key.first, key.second, cell.visibility, cell.timestamp, cell.value});
    }
    return out;
}

void KeyValueEngine::checkpoint(const std::filesystem::path& path) const
{
    snapshot::File file{id(), {}};
    {
        std::shared_lock lock(mutex_);
        snapshot::Writer meta;
        meta.u64(next_timestamp_);
        file.sections.push_back({meta_section, meta.bytes()});
        for (const auto& [name, t] : tables_) {
            snapshot::Writer w;
            w.str(name);
            w.u64(t.size());
            for (const auto& [key, cell] : t) {
                w.str(key.first);
                w.str(key.second);
                w.str(cell.visibility);
                w.u64(cell.timestamp);
                w.str(cell.value);
            }
            file.sections.push_back({table_section, w.bytes()});
        }
    }
    snapshot::write_file(path, file);
}

std::shared_ptr<KeyValueEngine> KeyValueEngine::restore(const std::filesystem::path& path)
{
    auto file = snapshot::read_file(path);
    if (file.engine.kind != EngineKind::keyvalue)
        throw Error(Errc::snapshot_error, path.string() + " is not a key-value snapshot");
    auto engine = std::make_shared<KeyValueEngine>(file.engine.id);
    bool saw_meta = false;
    for (const auto& section : file.sections) {
        snapshot::Reader r(section.payload);
        if (section.tag == meta_section) {
            engine->next_timestamp_ = r.u64();
            saw_meta = true;
        } else if (section.tag == table_section) {
            auto& t = engine->tables_[r.str()];
            auto n = r.u64();
            for (std::uint64_t i = 0; i < n; ++i) {
                auto row = r.str();
                auto col = r.str();
                auto vis = r.str();
                auto ts = r.u64();
                auto value = r.str();
                VisibilityExpr label;
                try {
                    label = VisibilityExpr::parse(vis);
                } catch (const Error& e) {
                    throw Error(Errc::snapshot_error, std::string("corrupt visibility: ") + e.what());
                }
                t.insert_or_assign({std::move(row), std::move(col)},
                                   StoredCell{std::move(vis), std::move(label), ts, std::move(value)});
            }
        } else {
            throw Error(Errc::snapshot_error, "unknown key-value section");
        }
        r.expect_done();
    }
    if (!saw_meta) throw Error(Errc::snapshot_error, "key-value snapshot missing metadata section");
    return engine;
}

} // namespace polyhub::engines
