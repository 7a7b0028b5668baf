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

#include "polyhub/islands/registry.hpp"

#include <algorithm>
#include <mutex>

#include "polyhub/error.hpp"
#include "polyhub/text.hpp"

namespace polyhub::islands {

IslandTag island_of(const IslandOp& op) noexcept
{
    return static_cast<IslandTag>(op.index());
}

NativeValue execute(const NativeCall& call, const engines::AuthSet& auths)
{
    return std::visit(
        [&](const auto& c) -> NativeValue {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, RelSelectCall>)
                return c.engine->select(c.query, c.mode);
            else if constexpr (std::is_same_v<T, KvScanCall>)
                return c.engine->scan(c.table, c.rows, c.columns, auths);
            else
                return c.engine->subarray(c.array, c.ranges);
        },
        call);
}

namespace {

std::string select_summary(const engines::SelectQuery& q)
{
    std::string out = "rel_select(" + q.table + ", cols=";
    out += q.columns.empty() ? std::string("*") : "[" + text::join(q.columns, ",") + "]";
    if (!q.where.empty()) {
        std::vector<std::string> terms;
        for (const auto& c : q.where)
            terms.push_back(c.column + " " + std::string(engines::to_string(c.op)) + " "
                            + engines::render_scalar(c.literal));
        out += ", where=[" + text::join(terms, " AND ") + "]";
    }
    if (q.limit) out += ", limit=" + std::to_string(*q.limit);
    return out + ")";
}

} // namespace

std::string summary(const NativeCall& call)
{
    return std::visit(
        [](const auto& c) -> std::string {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, RelSelectCall>) {
                return select_summary(c.query);
            } else if constexpr (std::is_same_v<T, KvScanCall>) {
                std::string out = "kv_scan(" + c.table;
                if (c.rows) out += ", rows=[" + c.rows->start + "," + c.rows->end + ")";
                if (c.columns) out += ", cols=[" + text::join(*c.columns, ",") + "]";
                return out + ")";
            } else {
                std::vector<std::string> ranges;
                for (const auto& r : c.ranges) ranges.push_back(std::to_string(r.lo) + ":" + std::to_string(r.hi));
                return "array_subarray(" + c.array + ", [" + text::join(ranges, ",") + "])";
            }
        },
        call);
}

Shim::Shim(IslandTag island, engines::EngineHandle engine) : island_(island), engine_(std::move(engine))
{
    switch (island_) {
    case IslandTag::REL: capabilities_ = {OperatorKind::select}; break;
    case IslandTag::KV: capabilities_ = {OperatorKind::scan}; break;
    case IslandTag::ARR: capabilities_ = {OperatorKind::sub}; break;
    }
}

NativeCall Shim::translate(const IslandOp& op) const
{
    auto kind = static_cast<OperatorKind>(op.index());
    if (!capabilities_.contains(kind) || island_of(op) != island_)
        throw Error(Errc::unsupported, "shim " + std::string(to_string(island_)) + ":" + engine_id().id
                                           + " cannot translate a " + std::string(to_string(island_of(op)))
                                           + " operator");
    return std::visit(
        [&](const auto& o) -> NativeCall {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, RelSelect>)
                return RelSelectCall{engines::as_relational(engine_), o.query, o.mode};
            else if constexpr (std::is_same_v<T, KvScan>)
                return KvScanCall{engines::as_keyvalue(engine_), o.table, o.rows, o.columns};
            else
                return ArrSubCall{engines::as_array(engine_), o.array, o.ranges};
        },
        op);
}

namespace {

Island make_island(IslandTag tag)
{
    Island island;
    island.tag = tag;
    island.data_model = data_model_of(tag);
    switch (tag) {
    case IslandTag::REL: island.operators = {"select", "project", "filter", "limit", "cast"}; break;
    case IslandTag::KV: island.operators = {"scan"}; break;
    case IslandTag::ARR: island.operators = {"sub"}; break;
    }
    return island;
}

} // namespace

void Registry::add_island(IslandTag tag)
{
    std::unique_lock lock(mutex_);
    if (islands_.contains(tag)) return;
    islands_.emplace(tag, make_island(tag));
    codecs_.push_back({tag, CastCodec::Direction::encode});
    codecs_.push_back({tag, CastCodec::Direction::decode});
}

void Registry::register_engine(IslandTag tag, engines::EngineHandle engine)
{
    auto id = engines::engine_id(engine);
    if (id.kind != data_model_of(tag))
        throw Error(Errc::kind_mismatch, "engine '" + id.id + "' is " + std::string(engines::to_string(id.kind))
                                             + ", island " + std::string(to_string(tag)) + " needs "
                                             + std::string(engines::to_string(data_model_of(tag))));
    add_island(tag);
    std::unique_lock lock(mutex_);
    for (const auto& existing : engines_) {
        if (engines::engine_id(existing).id == id.id)
            throw Error(Errc::duplicate_binding, "engine '" + id.id + "' is already registered");
    }
    islands_.at(tag).engines.push_back(id);
    engines_.push_back(engine);
    shims_.emplace_back(tag, std::move(engine));
}

std::optional<Island> Registry::island(IslandTag tag) const
{
    std::shared_lock lock(mutex_);
    auto it = islands_.find(tag);
    if (it == islands_.end()) return std::nullopt;
    return it->second;
}

std::vector<Island> Registry::islands() const
{
    std::shared_lock lock(mutex_);
    std::vector<Island> out;
    for (const auto& [_, island] : islands_) out.push_back(island);
    return out;
}

std::vector<engines::EngineId> Registry::engines_of(IslandTag tag) const
{
    std::shared_lock lock(mutex_);
    auto it = islands_.find(tag);
    if (it == islands_.end()) return {};
    return it->second.engines;
}

std::optional<engines::EngineHandle> Registry::engine(const std::string& id) const
{
    std::shared_lock lock(mutex_);
    for (const auto& e : engines_)
        if (engines::engine_id(e).id == id) return e;
    return std::nullopt;
}

std::vector<engines::EngineHandle> Registry::all_engines() const
{
    std::shared_lock lock(mutex_);
    return engines_;
}

Shim Registry::shim(IslandTag tag, const std::string& engine_id) const
{
    std::shared_lock lock(mutex_);
    for (const auto& s : shims_)
        if (s.island() == tag && s.engine_id().id == engine_id) return s;
    throw Error(Errc::not_found, "no shim binds engine '" + engine_id + "' to island " + std::string(to_string(tag)));
}

RegistryStats Registry::stats() const
{
    std::shared_lock lock(mutex_);
    return {engines_.size(), islands_.size(), shims_.size(), codecs_.size()};
}

nlohmann::json Registry::dump() const
{
    std::shared_lock lock(mutex_);
    nlohmann::json doc;
    doc["islands"] = nlohmann::json::array();
    for (const auto& [tag, island] : islands_) {
        nlohmann::json engines = nlohmann::json::array();
        for (const auto& e : island.engines) engines.push_back(e.id);
        doc["islands"].push_back({{"tag", to_string(tag)},
                                  {"data_model", engines::to_string(island.data_model)},
                                  {"operators", island.operators},
                                  {"engines", engines}});
    }
    doc["engines"] = nlohmann::json::array();
    for (const auto& e : engines_) {
        auto id = engines::engine_id(e);
        doc["engines"].push_back({{"id", id.id}, {"kind", engines::to_string(id.kind)}});
    }
    doc["shims"] = nlohmann::json::array();
    for (const auto& s : shims_) {
        nlohmann::json caps = nlohmann::json::array();
        for (auto c : s.capabilities())
            caps.push_back(c == OperatorKind::select ? "select" : c == OperatorKind::scan ? "scan" : "sub");
        doc["shims"].push_back({{"island", to_string(s.island())}, {"engine", s.engine_id().id}, {"capabilities", caps}});
    }
    doc["cast_codecs"] = nlohmann::json::array();
    for (const auto& c : codecs_) {
        doc["cast_codecs"].push_back(
            {{"island", to_string(c.island)},
             {"direction", c.direction == CastCodec::Direction::encode ? "to_associative" : "from_associative"}});
    }
    return doc;
}

std::string_view to_string(Architecture arch) noexcept
{
    switch (arch) {
    case Architecture::federated: return "federated";
    case Architecture::polyglot: return "polyglot";
    case Architecture::multistore: return "multistore";
    case Architecture::polystore: return "polystore";
    }
    return "federated";
}

Architecture classify_architecture(const std::vector<engines::EngineKind>& stores, std::size_t interface_count)
{
    if (stores.empty()) throw Error(Errc::invalid_argument, "at least one store is required");
    if (interface_count == 0) throw Error(Errc::invalid_argument, "interface count must be positive");
    bool homogeneous = std::all_of(stores.begin(), stores.end(), [&](auto k) { return k == stores.front(); });
    if (homogeneous) return interface_count == 1 ? Architecture::federated : Architecture::polyglot;
    return interface_count == 1 ? Architecture::multistore : Architecture::polystore;
}

} // namespace polyhub::islands
