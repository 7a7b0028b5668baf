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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polyhub::engines {

enum class ColumnType : std::uint8_t { text = 0, int64 = 1, float64 = 2 };

std::string_view to_string(ColumnType type) noexcept;
ColumnType column_type_from_string(std::string_view name);

/// Non-null scalar. Index order matches ColumnType.
using Scalar = std::variant<std::string, std::int64_t, double>;

/// A relation cell: monostate is SQL-style null.
using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

using Row = std::vector<Cell>;

ColumnType scalar_type(const Scalar& value) noexcept;
Cell to_cell(const Scalar& value);
std::optional<Scalar> to_scalar(const Cell& cell);
std::string render_scalar(const Scalar& value);
std::string render_cell(const Cell& cell);

struct Column {
    std::string name;
    ColumnType type = ColumnType::text;

    bool operator==(const Column&) const = default;
};

class Schema {
public:
    Schema() = default;
    /// Throws Errc::schema_violation on empty or duplicate names, or a key
    /// column that does not exist.
    explicit Schema(std::vector<Column> columns, std::optional<std::string> key_column = std::nullopt);

    const std::vector<Column>& columns() const noexcept { return columns_; }
    const std::optional<std::string>& key_column() const noexcept { return key_column_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Like index_of but throws Errc::unknown_column.
    std::size_t require(std::string_view name) const;
    std::optional<std::size_t> key_index() const;
    std::size_t size() const noexcept { return columns_.size(); }

    bool operator==(const Schema&) const = default;

private:
    std::vector<Column> columns_;
    std::optional<std::string> key_column_;
};

/// Schema-carrying table. Rows keep insertion order.
struct Relation {
    Schema schema;
    std::vector<Row> rows;

    std::size_t row_count() const noexcept { return rows.size(); }
    bool operator==(const Relation&) const = default;
};

/// Checks a row against the schema: arity and cell types. Int cells destined
/// for float64 columns are widened in place.
void conform_row(const Schema& schema, Row& row);

enum class CompareOp { eq, ne, lt, le, gt, ge };

std::string_view to_string(CompareOp op) noexcept;
std::optional<CompareOp> compare_op_from_string(std::string_view text) noexcept;

struct Comparison {
    std::string column;
    CompareOp op = CompareOp::eq;
    Scalar literal;

    bool operator==(const Comparison&) const = default;
};

/// Conjunction of single-column comparisons. Empty means "all rows".
using Predicate = std::vector<Comparison>;

/// strict: text columns may only be compared with text literals.
/// lenient: used for cast-produced columns; numeric comparison when both sides
/// parse as numbers, otherwise byte-lexicographic on rendered text.
enum class CompareMode { strict, lenient };

/// Resolves column indices and validates literal types once, so evaluating a
/// predicate over many rows stays cheap.
class BoundPredicate {
public:
    BoundPredicate(const Schema& schema, const Predicate& predicate, CompareMode mode);
    bool matches(const Row& row) const;

private:
    struct Term {
        std::size_t index;
        CompareOp op;
        Scalar literal;
    };
    std::vector<Term> terms_;
    CompareMode mode_;
};

/// Relational op tree: project(cols) over filter(where) over source, then limit.
struct SelectQuery {
    std::string table;
    std::vector<std::string> columns; // empty = '*'
    Predicate where;
    std::optional<std::size_t> limit;

    bool operator==(const SelectQuery&) const = default;
};

/// Evaluates the select op tree over an in-memory relation.
Relation select_from(const Relation& source, const SelectQuery& query,
                     CompareMode mode = CompareMode::strict);

} // namespace polyhub::engines
