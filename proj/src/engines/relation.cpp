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

#include "polyhub/engines/relation.hpp"

#include <algorithm>
#include <set>

#include "polyhub/error.hpp"
#include "polyhub/text.hpp"

namespace polyhub::engines {

std::string_view to_string(ColumnType type) noexcept
{
    switch (type) {
    case ColumnType::text: return "text";
    case ColumnType::int64: return "int64";
    case ColumnType::float64: return "float64";
    }
    return "text";
}

ColumnType column_type_from_string(std::string_view name)
{
    auto lower = text::to_lower(name);
    if (lower == "text") return ColumnType::text;
    if (lower == "int64" || lower == "int") return ColumnType::int64;
    if (lower == "float64" || lower == "float") return ColumnType::float64;
    throw Error(Errc::invalid_argument, "unknown column type '" + std::string(name) + "'");
}

ColumnType scalar_type(const Scalar& value) noexcept
{
    return static_cast<ColumnType>(value.index());
}

Cell to_cell(const Scalar& value)
{
    return std::visit([](const auto& v) -> Cell { return v; }, value);
}

std::optional<Scalar> to_scalar(const Cell& cell)
{
    if (std::holds_alternative<std::monostate>(cell)) return std::nullopt;
    if (auto* s = std::get_if<std::string>(&cell)) return Scalar{*s};
    if (auto* i = std::get_if<std::int64_t>(&cell)) return Scalar{*i};
    return Scalar{std::get<double>(cell)};
}

std::string render_scalar(const Scalar& value)
{
    if (auto* s = std::get_if<std::string>(&value)) return *s;
    if (auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    return text::format_double(std::get<double>(value));
}

std::string render_cell(const Cell& cell)
{
    auto scalar = to_scalar(cell);
    return scalar ? render_scalar(*scalar) : std::string("null");
}

Schema::Schema(std::vector<Column> columns, std::optional<std::string> key_column)
    : columns_(std::move(columns)), key_column_(std::move(key_column))
{
    std::set<std::string_view> seen;
    for (const auto& c : columns_) {
        if (c.name.empty())
            throw Error(Errc::schema_violation, "column name must not be empty");
        if (!seen.insert(c.name).second)
            throw Error(Errc::schema_violation, "duplicate column '" + c.name + "'");
    }
    if (key_column_ && !index_of(*key_column_))
        throw Error(Errc::schema_violation, "key column '" + *key_column_ + "' is not a column");
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const
{
    if (auto idx = index_of(name)) return *idx;
    throw Error(Errc::unknown_column, "unknown column '" + std::string(name) + "'");
}

std::optional<std::size_t> Schema::key_index() const
{
    return key_column_ ? index_of(*key_column_) : std::nullopt;
}

void conform_row(const Schema& schema, Row& row)
{
    if (row.size() != schema.size())
        throw Error(Errc::schema_violation, "row has " + std::to_string(row.size()) + " cells, schema has "
                                                + std::to_string(schema.size()) + " columns");
    for (std::size_t i = 0; i < row.size(); ++i) {
        auto& cell = row[i];
        if (std::holds_alternative<std::monostate>(cell)) continue;
        const auto& col = schema.columns()[i];
        auto actual = static_cast<ColumnType>(cell.index() - 1);
        if (actual == col.type) continue;
        if (col.type == ColumnType::float64 && actual == ColumnType::int64) {
            cell = static_cast<double>(std::get<std::int64_t>(cell));
            continue;
        }
        throw Error(Errc::type_mismatch, "column '" + col.name + "' expects " + std::string(to_string(col.type))
                                             + ", got " + std::string(to_string(actual)));
    }
}

std::string_view to_string(CompareOp op) noexcept
{
    switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    }
    return "=";
}

std::optional<CompareOp> compare_op_from_string(std::string_view text) noexcept
{
    if (text == "=") return CompareOp::eq;
    if (text == "!=") return CompareOp::ne;
    if (text == "<") return CompareOp::lt;
    if (text == "<=") return CompareOp::le;
    if (text == ">") return CompareOp::gt;
    if (text == ">=") return CompareOp::ge;
    return std::nullopt;
}

namespace {

template <typename T>
bool apply(CompareOp op, const T& lhs, const T& rhs)
{
    switch (op) {
    case CompareOp::eq: return lhs == rhs;
    case CompareOp::ne: return lhs != rhs;
    case CompareOp::lt: return lhs < rhs;
    case CompareOp::le: return lhs <= rhs;
    case CompareOp::gt: return lhs > rhs;
    case CompareOp::ge: return lhs >= rhs;
    }
    return false;
}

bool is_numeric(const Scalar& s) { return !std::holds_alternative<std::string>(s); }

double as_double(const Scalar& s)
{
    if (auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
    return std::get<double>(s);
}

bool compare_strict(CompareOp op, const Scalar& lhs, const Scalar& rhs)
{
    if (!is_numeric(lhs)) return apply(op, std::get<std::string>(lhs), std::get<std::string>(rhs));
    if (std::holds_alternative<std::int64_t>(lhs) && std::holds_alternative<std::int64_t>(rhs))
        return apply(op, std::get<std::int64_t>(lhs), std::get<std::int64_t>(rhs));
    return apply(op, as_double(lhs), as_double(rhs));
}

std::optional<double> numeric_view(const Scalar& s)
{
    if (is_numeric(s)) return as_double(s);
    return text::parse_double(std::get<std::string>(s));
}

bool compare_lenient(CompareOp op, const Scalar& lhs, const Scalar& rhs)
{
    auto ln = numeric_view(lhs);
    auto rn = numeric_view(rhs);
    if (ln && rn) {
        if (std::holds_alternative<std::int64_t>(lhs) && std::holds_alternative<std::int64_t>(rhs))
            return apply(op, std::get<std::int64_t>(lhs), std::get<std::int64_t>(rhs));
        return apply(op, *ln, *rn);
    }
    return apply(op, render_scalar(lhs), render_scalar(rhs));
}

} // namespace

BoundPredicate::BoundPredicate(const Schema& schema, const Predicate& predicate, CompareMode mode)
    : mode_(mode)
{
    terms_.reserve(predicate.size());
    for (const auto& cmp : predicate) {
        auto idx = schema.require(cmp.column);
        if (mode == CompareMode::strict) {
            bool text_column = schema.columns()[idx].type == ColumnType::text;
            if (text_column != !is_numeric(cmp.literal))
                throw Error(Errc::type_mismatch,
                            "cannot compare " + std::string(to_string(schema.columns()[idx].type)) + " column '"
                                + cmp.column + "' with " + std::string(to_string(scalar_type(cmp.literal)))
                                + " literal");
        }
        terms_.push_back({idx, cmp.op, cmp.literal});
    }
}

bool BoundPredicate::matches(const Row& row) const
{
    for (const auto& term : terms_) {
        auto value = to_scalar(row[term.index]);
        if (!value) return false;
        bool ok = mode_ == CompareMode::strict ? compare_strict(term.op, *value, term.literal)
                                               : compare_lenient(term.op, *value, term.literal);
        if (!ok) return false;
    }
    return true;
}

Relation select_from(const Relation& source, const SelectQuery& query, CompareMode mode)
{
    std::vector<std::size_t> projection;
    std::vector<Column> columns;
    if (query.columns.empty()) {
        for (std::size_t i = 0; i < source.schema.size(); ++i) projection.push_back(i);
        columns = source.schema.columns();
    } else {
        for (const auto& name : query.columns) {
            auto idx = source.schema.require(name);
            projection.push_back(idx);
            columns.push_back(source.schema.columns()[idx]);
        }
    }
    BoundPredicate predicate(source.schema, query.where, mode);

    std::optional<std::string> key;
    if (const auto& k = source.schema.key_column();
        k && std::find(query.columns.begin(), query.columns.end(), *k) != query.columns.end())
        key = k;
    if (query.columns.empty()) key = source.schema.key_column();

    Relation out{Schema(std::move(columns), key), {}};
    for (const auto& row : source.rows) {
        if (query.limit && out.rows.size() >= *query.limit) break;
        if (!predicate.matches(row)) continue;
        Row projected;
        projected.reserve(projection.size());
        for (auto idx : projection) projected.push_back(row[idx]);
        out.rows.push_back(std::move(projected));
    }
    return out;
}

} // namespace polyhub::engines
