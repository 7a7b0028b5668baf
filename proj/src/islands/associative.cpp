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

#include "polyhub/islands/associative.hpp"

#include <algorithm>
#include <set>

#include "polyhub/error.hpp"
#include "polyhub/text.hpp"

namespace polyhub::islands {

using engines::Cell;
using engines::Column;
using engines::ColumnType;
using engines::DenseArray;
using engines::KvEntry;
using engines::Relation;
using engines::Scalar;

std::string_view to_string(IslandTag tag) noexcept
{
    switch (tag) {
    case IslandTag::REL: return "REL";
    case IslandTag::KV: return "KV";
    case IslandTag::ARR: return "ARR";
    }
    return "REL";
}

IslandTag island_tag_from_string(std::string_view text)
{
    auto upper = text::to_upper(text);
    if (upper == "REL") return IslandTag::REL;
    if (upper == "KV") return IslandTag::KV;
    if (upper == "ARR") return IslandTag::ARR;
    throw Error(Errc::invalid_argument, "unknown island tag '" + std::string(text) + "'");
}

engines::EngineKind data_model_of(IslandTag tag) noexcept
{
    switch (tag) {
    case IslandTag::REL: return engines::EngineKind::relational;
    case IslandTag::KV: return engines::EngineKind::keyvalue;
    case IslandTag::ARR: return engines::EngineKind::array;
    }
    return engines::EngineKind::relational;
}

IslandTag island_of(const NativeValue& value) noexcept
{
    return static_cast<IslandTag>(value.index());
}

std::size_t result_rows(const NativeValue& value) noexcept
{
    if (auto* rel = std::get_if<Relation>(&value)) return rel->rows.size();
    if (auto* kv = std::get_if<std::vector<KvEntry>>(&value)) return kv->size();
    return std::get<DenseArray>(value).cells.size();
}

void AssociativeTable::insert(std::string rowkey, std::string colkey, Scalar value)
{
    if (rowkey.empty() || colkey.empty())
        throw Error(Errc::invalid_argument, "associative keys must be non-empty");
    auto [it, inserted] = triples_.try_emplace({std::move(rowkey), std::move(colkey)}, std::move(value));
    if (!inserted)
        throw Error(Errc::duplicate_key,
                    "duplicate associative key (" + it->first.first + ", " + it->first.second + ")");
}

AssociativeTable to_associative(const Relation& relation)
{
    AssociativeTable out;
    const auto& cols = relation.schema.columns();
    auto key = relation.schema.key_index();
    for (std::size_t r = 0; r < relation.rows.size(); ++r) {
        const auto& row = relation.rows[r];
        std::string rowkey = key ? engines::render_cell(row[*key]) : "r" + text::zero_pad(r);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            // A declared "_row" key is the rowkey itself, not a data column.
            if (key && c == *key && cols[c].name == row_column) continue;
            if (auto value = engines::to_scalar(row[c])) out.insert(rowkey, cols[c].name, std::move(*value));
        }
    }
    return out;
}

AssociativeTable to_associative(const std::vector<KvEntry>& entries)
{
    AssociativeTable out;
    for (const auto& e : entries) out.insert(e.row, e.column, e.value);
    return out;
}

AssociativeTable to_associative(const DenseArray& array)
{
    AssociativeTable out;
    if (array.dims.size() == 1) {
        for (std::uint64_t i = 0; i < array.dims[0].length; ++i) out.insert(text::zero_pad(i), "v", array.cells[i]);
    } else if (array.dims.size() == 2) {
        auto cols = array.dims[1].length;
        for (std::uint64_t i = 0; i < array.dims[0].length; ++i)
            for (std::uint64_t j = 0; j < cols; ++j)
                out.insert(text::zero_pad(i), text::zero_pad(j), array.cells[i * cols + j]);
    } else {
        throw Error(Errc::unsupported, "cannot cast array '" + array.name + "' of rank "
                                           + std::to_string(array.dims.size()) + "; only rank 1 and 2 are supported");
    }
    return out;
}

AssociativeTable to_associative(const NativeValue& value)
{
    return std::visit([](const auto& v) { return to_associative(v); }, value);
}

Relation relation_from_associative(const AssociativeTable& table)
{
    std::set<std::string> colkeys;
    std::vector<std::string> rowkeys;
    for (const auto& [key, _] : table.triples()) {
        if (rowkeys.empty() || rowkeys.back() != key.first) rowkeys.push_back(key.first);
        colkeys.insert(key.second);
    }
    std::vector<std::string> names(colkeys.begin(), colkeys.end());

    // int64 if all int, else float64 if all numeric, else text.
    std::vector<ColumnType> types(names.size(), ColumnType::int64);
    for (const auto& [key, value] : table.triples()) {
        auto c = static_cast<std::size_t>(
            std::lower_bound(names.begin(), names.end(), key.second) - names.begin());
        auto t = engines::scalar_type(value);
        if (t == ColumnType::text)
            types[c] = ColumnType::text;
        else if (t == ColumnType::float64 && types[c] == ColumnType::int64)
            types[c] = ColumnType::float64;
    }

    std::vector<Column> columns{{std::string(row_column), ColumnType::text}};
    for (std::size_t c = 0; c < names.size(); ++c) columns.push_back({names[c], types[c]});
    Relation out{engines::Schema(std::move(columns), std::string(row_column)), {}};

    std::size_t r = 0;
    for (auto it = table.triples().begin(); it != table.triples().end(); ++r) {
        engines::Row row(names.size() + 1);
        row[0] = rowkeys[r];
        for (; it != table.triples().end() && it->first.first == rowkeys[r]; ++it) {
            auto c = static_cast<std::size_t>(
                std::lower_bound(names.begin(), names.end(), it->first.second) - names.begin());
            const auto& value = it->second;
            switch (types[c]) {
            case ColumnType::text: row[c + 1] = engines::render_scalar(value); break;
            case ColumnType::int64: row[c + 1] = std::get<std::int64_t>(value); break;
            case ColumnType::float64:
                row[c + 1] = std::holds_alternative<double>(value)
                                 ? std::get<double>(value)
                                 : static_cast<double>(std::get<std::int64_t>(value));
                break;
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<KvEntry> entries_from_associative(const AssociativeTable& table)
{
    std::vector<KvEntry> out;
    out.reserve(table.size());
    for (const auto& [key, value] : table.triples())
        out.push_back({key.first, key.second, std::string(), 0, engines::render_scalar(value)});
    return out;
}

namespace {

std::uint64_t index_key(const std::string& key)
{
    auto v = text::parse_int64(key);
    if (!v || *v < 0 || key.front() == '+' || key.front() == '-')
        throw Error(Errc::invalid_argument, "associative key '" + key + "' is not an array index");
    return static_cast<std::uint64_t>(*v);
}

double numeric_value(const Scalar& value)
{
    if (auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    if (auto* d = std::get_if<double>(&value)) return *d;
    if (auto parsed = text::parse_double(std::get<std::string>(value))) return *parsed;
    throw Error(Errc::type_mismatch, "value '" + std::get<std::string>(value) + "' is not numeric");
}

} // namespace

DenseArray array_from_associative(const AssociativeTable& table)
{
    bool one_dim = !table.triples().empty()
                   && std::all_of(table.triples().begin(), table.triples().end(),
                                  [](const auto& t) { return t.first.second == "v"; });
    std::vector<std::pair<std::vector<std::uint64_t>, double>> cells;
    std::uint64_t rows = 0, cols = 0;
    for (const auto& [key, value] : table.triples()) {
        auto i = index_key(key.first);
        rows = std::max(rows, i + 1);
        if (one_dim) {
            cells.push_back({{i}, numeric_value(value)});
        } else {
            auto j = index_key(key.second);
            cols = std::max(cols, j + 1);
            cells.push_back({{i, j}, numeric_value(value)});
        }
    }
    std::vector<engines::Dimension> dims{{"i", rows}};
    if (!one_dim) dims.push_back({"j", cols});
    auto out = DenseArray::zeros(std::string(cast_array_name), std::move(dims));
    for (const auto& [coords, v] : cells) out.cells[out.offset(coords)] = v;
    return out;
}

NativeValue from_associative(const AssociativeTable& table, IslandTag target)
{
    switch (target) {
    case IslandTag::REL: return relation_from_associative(table);
    case IslandTag::KV: return entries_from_associative(table);
    case IslandTag::ARR: return array_from_associative(table);
    }
    throw Error(Errc::unsupported, "unknown island");
}

NativeValue cast(const NativeValue& value, IslandTag from, IslandTag to)
{
    if (island_of(value) != from)
        throw Error(Errc::kind_mismatch, "value is native to " + std::string(to_string(island_of(value)))
                                             + ", not " + std::string(to_string(from)));
    return from_associative(to_associative(value), to);
}

} // namespace polyhub::islands
