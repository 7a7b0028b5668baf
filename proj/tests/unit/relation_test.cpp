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

#include <gtest/gtest.h>

#include <random>

#include "polyhub/engines/relation.hpp"
#include "polyhub/error.hpp"

using namespace polyhub;
using namespace polyhub::engines;

namespace {

Schema people() { return Schema({{"name", ColumnType::text}, {"age", ColumnType::int64}}, "name"); }

Relation seeded_people()
{
    Relation r{people(), {}};
    const std::pair<const char*, std::int64_t> seed[] = {{"ann", 25}, {"bob", 31}, {"cy", 40}, {"di", 18}, {"ed", 33}};
    for (auto [n, a] : seed) r.rows.push_back({std::string(n), a});
    return r;
}

} // namespace

TEST(Schema, RejectsDuplicateAndEmptyNames)
{
    EXPECT_THROW(Schema({{"a", ColumnType::text}, {"a", ColumnType::int64}}), Error);
    EXPECT_THROW(Schema({{"", ColumnType::text}}), Error);
    EXPECT_THROW(Schema({{"a", ColumnType::text}}, "b"), Error);
    Schema ok({{"a", ColumnType::text}}, "a");
    EXPECT_EQ(ok.key_index(), 0u);
    EXPECT_EQ(ok.index_of("a"), 0u);
    EXPECT_FALSE(ok.index_of("z"));
}

TEST(Schema, RequireThrowsUnknownColumn)
{
    try {
        people().require("height");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::unknown_column);
    }
}

TEST(ConformRow, ChecksArityAndTypesAndWidensIntegers)
{
    Schema s({{"x", ColumnType::float64}, {"t", ColumnType::text}});
    Row row{std::int64_t{3}, std::string("a")};
    conform_row(s, row);
    EXPECT_TRUE(std::holds_alternative<double>(row[0]));

    Row short_row{1.0};
    EXPECT_THROW(conform_row(s, short_row), Error);
    Row wrong{std::string("no"), std::string("a")};
    try {
        conform_row(s, wrong);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::type_mismatch);
    }
    Row with_null{std::monostate{}, std::monostate{}};
    EXPECT_NO_THROW(conform_row(s, with_null));
}

TEST(SelectFrom, FilterMatchesBruteForceScan)
{
    auto rel = seeded_people();
    auto out = select_from(rel, {"people", {}, {{"age", CompareOp::gt, std::int64_t{30}}}, std::nullopt});
    std::vector<std::int64_t> ages;
    for (const auto& row : out.rows) ages.push_back(std::get<std::int64_t>(row[1]));
    EXPECT_EQ(ages, (std::vector<std::int64_t>{31, 40, 33}));
}

TEST(SelectFrom, ProjectionOrderAndInsertionOrder)
{
    auto rel = seeded_people();
    auto out = select_from(rel, {"people", {"age", "name"}, {}, std::nullopt});
    ASSERT_EQ(out.schema.size(), 2u);
    EXPECT_EQ(out.schema.columns()[0].name, "age");
    EXPECT_EQ(out.rows.size(), 5u);
    EXPECT_EQ(std::get<std::string>(out.rows[0][1]), "ann");
    EXPECT_EQ(std::get<std::string>(out.rows[4][1]), "ed");
}

TEST(SelectFrom, LimitZeroKeepsSchema)
{
    auto out = select_from(seeded_people(), {"people", {}, {}, 0});
    EXPECT_TRUE(out.rows.empty());
    EXPECT_EQ(out.schema, people());
}

TEST(SelectFrom, StrictModeRejectsTextNumericComparison)
{
    auto rel = seeded_people();
    EXPECT_THROW(select_from(rel, {"p", {}, {{"name", CompareOp::eq, std::int64_t{1}}}, {}}), Error);
    EXPECT_THROW(select_from(rel, {"p", {}, {{"age", CompareOp::eq, std::string("1")}}, {}}), Error);
    EXPECT_THROW(select_from(rel, {"p", {}, {{"zzz", CompareOp::eq, std::int64_t{1}}}, {}}), Error);
}

TEST(SelectFrom, LenientModeComparesNumericText)
{
    Relation rel{Schema({{"v", ColumnType::text}}), {{std::string("9")}, {std::string("10")}, {std::string("x")}}};
    auto out = select_from(rel, {"t", {}, {{"v", CompareOp::gt, std::int64_t{5}}}, {}}, CompareMode::lenient);
    // "9" and "10" compare numerically; "x" falls back to bytes and sorts after "5".
    ASSERT_EQ(out.rows.size(), 3u);
    EXPECT_EQ(std::get<std::string>(out.rows[1][0]), "10");
    auto below = select_from(rel, {"t", {}, {{"v", CompareOp::lt, std::int64_t{10}}}, {}}, CompareMode::lenient);
    ASSERT_EQ(below.rows.size(), 1u);
    EXPECT_EQ(std::get<std::string>(below.rows[0][0]), "9");
}

TEST(SelectFrom, NullsNeverMatch)
{
    Relation rel{Schema({{"v", ColumnType::int64}}), {{std::monostate{}}, {std::int64_t{1}}}};
    auto out = select_from(rel, {"t", {}, {{"v", CompareOp::ne, std::int64_t{5}}}, {}});
    EXPECT_EQ(out.rows.size(), 1u);
}

TEST(SelectFrom, RandomPredicatesAgreeWithOracle)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> val(-5, 5);
    const CompareOp ops[] = {CompareOp::eq, CompareOp::ne, CompareOp::lt, CompareOp::le, CompareOp::gt, CompareOp::ge};
    auto oracle = [](CompareOp op, std::int64_t a, std::int64_t b) {
        switch (op) {
        case CompareOp::eq: return a == b;
        case CompareOp::ne: return a != b;
        case CompareOp::lt: return a < b;
        case CompareOp::le: return a <= b;
        case CompareOp::gt: return a > b;
        case CompareOp::ge: return a >= b;
        }
        return false;
    };
    for (int trial = 0; trial < 200; ++trial) {
        Relation rel{Schema({{"a", ColumnType::int64}, {"b", ColumnType::int64}}), {}};
        for (int i = 0; i < 20; ++i) rel.rows.push_back({val(rng), val(rng)});
        Comparison c1{"a", ops[rng() % 6], val(rng)};
        Comparison c2{"b", ops[rng() % 6], val(rng)};
        auto out = select_from(rel, {"t", {}, {c1, c2}, {}});
        std::vector<Row> expected;
        for (const auto& row : rel.rows) {
            auto a = std::get<std::int64_t>(row[0]);
            auto b = std::get<std::int64_t>(row[1]);
            if (oracle(c1.op, a, std::get<std::int64_t>(c1.literal)) && oracle(c2.op, b, std::get<std::int64_t>(c2.literal)))
                expected.push_back(row);
        }
        ASSERT_EQ(out.rows, expected);
    }
}
