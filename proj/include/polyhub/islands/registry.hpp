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

#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "polyhub/engines/array.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relational.hpp"
#include "polyhub/islands/associative.hpp"

namespace polyhub::islands {

// Island-level operator trees, one per island. REL select over a base table
// or a temporary source; KV scan; ARR sub-block.

struct RelSelect {
    engines::SelectQuery query;
    /// lenient when the source is a cast-produced temporary.
    engines::CompareMode mode = engines::CompareMode::strict;
};

struct KvScan {
    std::string table;
    std::optional<engines::RowRange> rows;
    std::optional<std::vector<std::string>> columns;
};

struct ArrSub {
    std::string array;
    std::vector<engines::IndexRange> ranges;
};

using IslandOp = std::variant<RelSelect, KvScan, ArrSub>;

IslandTag island_of(const IslandOp& op) noexcept;

// Native calls produced by a shim, bound to one engine.

struct RelSelectCall {
    std::shared_ptr<engines::RelationalEngine> engine;
    engines::SelectQuery query;
    engines::CompareMode mode = engines::CompareMode::strict;
};

struct KvScanCall {
    std::shared_ptr<engines::KeyValueEngine> engine;
    std::string table;
    std::optional<engines::RowRange> rows;
    std::optional<std::vector<std::string>> columns;
};

struct ArrSubCall {
    std::shared_ptr<engines::ArrayEngine> engine;
    std::string array;
    std::vector<engines::IndexRange> ranges;
};

using NativeCall = std::variant<RelSelectCall, KvScanCall, ArrSubCall>;

/// Runs the call. `auths` only affects key-value scans.
NativeValue execute(const NativeCall& call, const engines::AuthSet& auths = {});
/// One-line description, e.g. "kv_scan(w, rows=[a,m))".
std::string summary(const NativeCall& call);

enum class OperatorKind { select, scan, sub };

/// Translator from one island's operators to one engine's native calls.
class Shim {
public:
    Shim(IslandTag island, engines::EngineHandle engine);

    IslandTag island() const noexcept { return island_; }
    const engines::EngineHandle& engine() const noexcept { return engine_; }
    engines::EngineId engine_id() const { return engines::engine_id(engine_); }
    const std::set<OperatorKind>& capabilities() const noexcept { return capabilities_; }

    /// Throws Errc::unsupported when the operator is outside this shim's
    /// capability set.
    NativeCall translate(const IslandOp& op) const;

private:
    IslandTag island_;
    engines::EngineHandle engine_;
    std::set<OperatorKind> capabilities_;
};

struct Island {
    IslandTag tag = IslandTag::REL;
    engines::EngineKind data_model = engines::EngineKind::relational;
    std::vector<std::string> operators;
    /// Registration order preserved; the planner breaks ties with it.
    std::vector<engines::EngineId> engines;
};

struct CastCodec {
    IslandTag island = IslandTag::REL;
    enum class Direction { encode, decode } direction = Direction::encode;
};

struct RegistryStats {
    std::size_t engine_count = 0;
    std::size_t island_count = 0;
    std::size_t shim_count = 0;
    std::size_t cast_codec_count = 0;

    bool operator==(const RegistryStats&) const = default;
};

/// Islands, their bound engines, one shim per binding and two cast codecs per
/// island. Mutations are serialized; lookups may run concurrently.
class Registry {
public:
    /// Idempotent: adding an existing island is a no-op.
    void add_island(IslandTag tag);
    /// Adds the island if missing. Throws Errc::kind_mismatch or
    /// Errc::duplicate_binding.
    void register_engine(IslandTag tag, engines::EngineHandle engine);

    std::optional<Island> island(IslandTag tag) const;
    std::vector<Island> islands() const;
    std::vector<engines::EngineId> engines_of(IslandTag tag) const;
    std::optional<engines::EngineHandle> engine(const std::string& id) const;
    std::vector<engines::EngineHandle> all_engines() const;
    /// Throws Errc::not_found when no shim binds (island, engine).
    Shim shim(IslandTag tag, const std::string& engine_id) const;
    RegistryStats stats() const;

    /// {islands[], engines[], shims[], cast_codecs[]}
    nlohmann::json dump() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<IslandTag, Island> islands_;
    std::vector<engines::EngineHandle> engines_;
    std::vector<Shim> shims_;
    std::vector<CastCodec> codecs_;
};

enum class Architecture { federated, polyglot, multistore, polystore };

std::string_view to_string(Architecture arch) noexcept;

/// Homogeneous or heterogeneous stores crossed with one or several query
/// interfaces. Throws Errc::invalid_argument on an empty store list or a zero
/// interface count.
Architecture classify_architecture(const std::vector<engines::EngineKind>& stores, std::size_t interface_count);

} // namespace polyhub::islands
