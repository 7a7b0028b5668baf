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
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "polyhub/engines/array.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relation.hpp"

namespace polyhub::islands {

enum class IslandTag { REL, KV, ARR };

std::string_view to_string(IslandTag tag) noexcept;
/// Accepts the tag case-insensitively; throws Errc::invalid_argument.
IslandTag island_tag_from_string(std::string_view text);
engines::EngineKind data_model_of(IslandTag tag) noexcept;

/// The value an island's engines natively produce.
using NativeValue = std::variant<engines::Relation, std::vector<engines::KvEntry>, engines::DenseArray>;

IslandTag island_of(const NativeValue& value) noexcept;
std::size_t result_rows(const NativeValue& value) noexcept;

/// Set of (rowkey, colkey) -> scalar triples. Every cast between islands goes
/// through this form, so each island needs exactly one encoder and one decoder.
class AssociativeTable {
public:
    using Key = std::pair<std::string, std::string>;

    /// Throws on empty keys or a (rowkey, colkey) already present.
    void insert(std::string rowkey, std::string colkey, engines::Scalar value);

    const std::map<Key, engines::Scalar>& triples() const noexcept { return triples_; }
    std::size_t size() const noexcept { return triples_.size(); }
    bool operator==(const AssociativeTable&) const = default;

private:
    std::map<Key, engines::Scalar> triples_;
};

/// Name of the synthetic column carrying rowkeys into relations.
inline constexpr std::string_view row_column = "_row";
/// Name given to arrays decoded from the interchange form.
inline constexpr std::string_view cast_array_name = "cast";

AssociativeTable to_associative(const engines::Relation& relation);
AssociativeTable to_associative(const std::vector<engines::KvEntry>& entries);
/// Rank 1 and 2 only; higher ranks throw Errc::unsupported.
AssociativeTable to_associative(const engines::DenseArray& array);
AssociativeTable to_associative(const NativeValue& value);

engines::Relation relation_from_associative(const AssociativeTable& table);
std::vector<engines::KvEntry> entries_from_associative(const AssociativeTable& table);
engines::DenseArray array_from_associative(const AssociativeTable& table);
NativeValue from_associative(const AssociativeTable& table, IslandTag target);

/// from_associative(to_associative(value), target). `from` must match the
/// value's own island.
NativeValue cast(const NativeValue& value, IslandTag from, IslandTag to);

} // namespace polyhub::islands
