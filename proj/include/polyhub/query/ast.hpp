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

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyhub/engines/array.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relation.hpp"
#include "polyhub/islands/associative.hpp"

namespace polyhub::query {

using islands::IslandTag;

/// Heap cell with value semantics, for recursive AST nodes.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other)
    {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    const T& operator*() const { return *ptr_; }
    T& operator*() { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }
    T* operator->() { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

private:
    std::unique_ptr<T> ptr_;
};

struct ScopedExpr;

struct CastExpr {
    Box<ScopedExpr> inner;
    IslandTag target = IslandTag::REL;

    bool operator==(const CastExpr&) const = default;
};

struct SelectNode {
    std::vector<std::string> columns; // empty = '*'
    std::variant<std::string, CastExpr> source;
    engines::Predicate where;
    std::optional<std::size_t> limit;

    bool operator==(const SelectNode&) const = default;
};

struct ScanNode {
    std::string table;
    std::optional<engines::RowRange> rows;
    std::optional<std::vector<std::string>> columns;

    bool operator==(const ScanNode&) const = default;
};

struct SubNode {
    std::string array;
    std::vector<engines::IndexRange> ranges;

    bool operator==(const SubNode&) const = default;
};

/// An island-scoped query: the tag picks the island whose syntax and
/// semantics apply to the inner query. Variant index matches IslandTag.
struct ScopedExpr {
    IslandTag tag = IslandTag::REL;
    std::variant<SelectNode, ScanNode, SubNode> query;

    bool operator==(const ScopedExpr&) const = default;
};

using QueryAst = ScopedExpr;

/// A base object named by a query, with the island it is read through.
struct ObjectRef {
    IslandTag island = IslandTag::REL;
    std::string name;

    bool operator==(const ObjectRef&) const = default;
};

/// Every base table / array the query reads, outermost first.
std::vector<ObjectRef> referenced_objects(const QueryAst& ast);
/// Island tag of every scoped subquery, outermost first.
std::vector<IslandTag> scoped_islands(const QueryAst& ast);

} // namespace polyhub::query
