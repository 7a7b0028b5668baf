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

#include "polyhub/hub/hub.hpp"

#include <algorithm>

#include "polyhub/engines/array.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relational.hpp"
#include "polyhub/error.hpp"
#include "polyhub/formats.hpp"
#include "polyhub/query/parser.hpp"
#include "polyhub/text.hpp"

namespace polyhub::hub {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json cell_to_json(const engines::Cell& cell)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else return v;
        },
        cell);
}

islands::IslandTag island_for(engines::EngineKind kind)
{
    switch (kind) {
    case engines::EngineKind::relational: return islands::IslandTag::REL;
    case engines::EngineKind::keyvalue: return islands::IslandTag::KV;
    case engines::EngineKind::array: return islands::IslandTag::ARR;
    }
    return islands::IslandTag::REL;
}

// Catalog locations first; objects the catalog has never seen are found by
// asking the engines.
class HubLocator final : public query::ObjectLocator {
public:
    HubLocator(const catalog::Catalog& catalog, const islands::Registry& registry)
        : catalog_(catalog), probe_(registry) {}

    std::vector<std::string> engines_holding(islands::IslandTag island, const std::string& object) const override
    {
        auto listed = catalog_.engines_holding(island, object);
        return listed.empty() ? probe_.engines_holding(island, object) : listed;
    }

private:
    const catalog::Catalog& catalog_;
    query::EngineProbe probe_;
};

} // namespace

json value_to_json(const islands::NativeValue& value)
{
    json doc{{"island", islands::to_string(islands::island_of(value))},
             {"row_count", islands::result_rows(value)}};
    if (auto* rel = std::get_if<engines::Relation>(&value)) {
        json columns = json::array();
        for (const auto& c : rel->schema.columns()) columns.push_back(c.name);
        json rows = json::array();
        for (const auto& row : rel->rows) {
            json r = json::array();
            for (const auto& cell : row) r.push_back(cell_to_json(cell));
            rows.push_back(std::move(r));
        }
        doc["columns"] = std::move(columns);
        doc["rows"] = std::move(rows);
    } else if (auto* kv = std::get_if<std::vector<engines::KvEntry>>(&value)) {
        json entries = json::array();
        for (const auto& e : *kv)
            entries.push_back({{"row", e.row},
                               {"column", e.column},
                               {"visibility", e.visibility},
                               {"timestamp", e.timestamp},
                               {"value", e.value}});
        doc["entries"] = std::move(entries);
    } else {
        const auto& arr = std::get<engines::DenseArray>(value);
        json dims = json::array();
        for (const auto& d : arr.dims) dims.push_back({{"name", d.name}, {"length", d.length}});
        doc["name"] = arr.name;
        doc["dims"] = std::move(dims);
        doc["cells"] = arr.cells;
    }
    return doc;
}

Hub::Hub(HubConfig config) : config_(std::move(config)), monitor_(config_.monitor_window)
{
    config_.validate();
    std::error_code ec;
    fs::create_directories(config_.data_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create data_dir " + config_.data_dir.string() + ": " + ec.message());

    for (const auto& id : config_.engines) {
        auto snap = config_.data_dir / (id.id + ".snap");
        engines::EngineHandle handle;
        if (fs::exists(snap)) {
            handle = engines::restore(snap);
            auto restored = engines::engine_id(handle);
            if (restored != id)
                throw Error(Errc::snapshot_error, "snapshot " + snap.string() + " holds " + restored.id + ":"
                                                      + std::string(engines::to_string(restored.kind))
                                                      + ", configured " + id.id + ":"
                                                      + std::string(engines::to_string(id.kind)));
        } else {
            handle = engines::make_engine(id);
        }
        registry_.register_engine(island_for(id.kind), handle);
    }

    if (auto policy = config_.resolved_policy_file(); !policy.empty()) policies_.replace(access::PolicyStore::load(policy));
    if (auto cat = config_.resolved_catalog_file(); fs::exists(cat)) catalog_ = catalog::Catalog::load(cat);
}

engines::EngineHandle Hub::engine(const std::string& id) const
{
    auto handle = registry_.engine(id);
    if (!handle) throw Error(Errc::not_found, "engine '" + id + "' is not registered");
    return *handle;
}

IngestReport Hub::ingest(const IngestSpec& spec)
{
    if (spec.island == islands::IslandTag::ARR)
        throw Error(Errc::unsupported, "ingest into the ARR island is not supported");
    auto bound = registry_.engines_of(spec.island);
    if (std::none_of(bound.begin(), bound.end(), [&](const auto& e) { return e.id == spec.engine; }))
        throw Error(Errc::not_found, "engine '" + spec.engine + "' is not bound to island "
                                         + std::string(islands::to_string(spec.island)));
    if (!text::is_identifier(spec.table)) throw Error(Errc::invalid_argument, "bad table name '" + spec.table + "'");

    auto bytes = formats::read_file(spec.source);
    auto handle = engine(spec.engine);
    IngestReport report;
    catalog::DatasetEntry entry;

    if (spec.island == islands::IslandTag::REL) {
        auto rel = engines::as_relational(handle);
        std::optional<engines::Schema> existing;
        if (rel->has_table(spec.table)) existing = rel->select({spec.table, {}, {}, 0}).schema;
        auto parsed = parse_source(bytes, spec.format, spec.drop_columns, existing);
        std::vector<engines::TxnStatement> txn;
        if (!existing) {
            if (spec.key_column && !parsed.relation.schema.index_of(*spec.key_column))
                throw Error(Errc::schema_violation, "key column '" + *spec.key_column + "' is not in the source");
            txn.push_back(engines::CreateTable{spec.table, engines::Schema(parsed.relation.schema.columns(), spec.key_column)});
        }
        report.rows_parsed = parsed.relation.rows.size();
        txn.push_back(engines::Insert{spec.table, parsed.relation.rows});
        rel->apply(txn);
        report.rows_loaded = parsed.relation.rows.size();
        report.columns_dropped = parsed.columns_dropped;
        for (const auto& c : parsed.relation.schema.columns()) report.columns.push_back(c.name);
    } else {
        auto kv = engines::as_keyvalue(handle);
        auto parsed = parse_source(bytes, spec.format, spec.drop_columns);
        const auto& schema = parsed.relation.schema;
        std::optional<std::size_t> key;
        if (spec.key_column) {
            key = schema.index_of(*spec.key_column);
            if (!key) throw Error(Errc::schema_violation, "key column '" + *spec.key_column + "' is not in the source");
        }
        std::vector<engines::KvMutation> batch;
        for (std::size_t r = 0; r < parsed.relation.rows.size(); ++r) {
            const auto& row = parsed.relation.rows[r];
            std::string rowkey;
            if (key) {
                if (std::holds_alternative<std::monostate>(row[*key]))
                    throw Error(Errc::schema_violation, "line " + std::to_string(parsed.line_numbers[r])
                                                            + ": key column '" + *spec.key_column + "' is empty");
                rowkey = engines::render_cell(row[*key]);
            } else {
                rowkey = "r" + text::zero_pad(r);
            }
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (key && c == *key) continue;
                if (std::holds_alternative<std::monostate>(row[c])) continue;
                batch.push_back({rowkey, schema.columns()[c].name, "", engines::render_cell(row[c])});
            }
        }
        report.rows_parsed = parsed.relation.rows.size();
        kv->put(spec.table, batch);
        report.rows_loaded = parsed.relation.rows.size();
        report.columns_dropped = parsed.columns_dropped;
        for (const auto& c : schema.columns()) report.columns.push_back(c.name);
    }

    auto checksum = formats::sha256_hex(bytes);
    auto id = "ds-" + checksum.substr(0, 12);
    if (auto prior = catalog_.get(id)) entry = *prior;
    entry.id = id;
    if (entry.name.empty()) entry.name = spec.table;
    if (entry.owner.empty()) entry.owner = "ingest";
    catalog::Location loc{spec.island, spec.engine, spec.table};
    if (std::find(entry.locations.begin(), entry.locations.end(), loc) == entry.locations.end())
        entry.locations.push_back(loc);
    entry.metatags.insert(spec.format == SourceFormat::csv ? "csv" : "jsonl");
    entry.metatags.insert(spec.table);
    entry.metatags.insert(report.columns.begin(), report.columns.end());
    entry.checksum = checksum;
    auto stamp = catalog::now();
    if (entry.created_at == 0) entry.created_at = stamp;
    entry.updated_at = std::max(stamp, entry.created_at);
    entry.stale = false;
    entry.source_path = fs::absolute(spec.source).string();
    catalog_.upsert(entry);
    report.dataset_id = id;
    return report;
}

catalog::CrawlReport Hub::crawl(const fs::path& root)
{
    return catalog_.crawl(root);
}

query::Plan Hub::plan(const std::string& text) const
{
    HubLocator locator(catalog_, registry_);
    return query::plan(query::parse(text), registry_, locator, monitor_);
}

std::string Hub::explain(const std::string& text) const
{
    return query::explain(plan(text));
}

query::ExecutionResult Hub::query(const std::string& principal_id, const std::string& text)
{
    auto principal = policies_.principal(principal_id).value_or(access::Principal{principal_id, {}, {}});
    auto ast = query::parse(text);
    auto decision = access::check_query(principal, ast, policies_);
    if (decision.verdict != access::Verdict::allow) throw access::AccessDenied(decision.reason);
    HubLocator locator(catalog_, registry_);
    auto p = query::plan(ast, registry_, locator, monitor_);
    return query::execute(p, principal, policies_, monitor_);
}

void Hub::reload_policies()
{
    auto path = config_.resolved_policy_file();
    if (path.empty()) throw Error(Errc::not_found, "no policy file configured");
    policies_.replace(access::PolicyStore::load(path));
}

void Hub::save_catalog() const
{
    catalog_.save(config_.resolved_catalog_file());
}

void Hub::snapshot() const
{
    for (const auto& handle : registry_.all_engines())
        engines::checkpoint(handle, config_.data_dir / (engines::engine_id(handle).id + ".snap"));
}

void Hub::shutdown()
{
    if (config_.snapshot_on_shutdown) snapshot();
    save_catalog();
}

} // namespace polyhub::hub
