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

#include "polyhub/access/policy.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/error.hpp"
#include "polyhub/query/parser.hpp"
#include "support.hpp"

using namespace polyhub;
using namespace polyhub::access;
using namespace polyhub::engines;
using islands::IslandTag;

namespace {

Relation person()
{
    return {Schema({{"name", ColumnType::text}, {"age", ColumnType::int64}, {"ssn", ColumnType::text}}),
            {{std::string("ann"), std::int64_t{25}, std::string("1")},
             {std::string("bob"), std::int64_t{31}, std::string("2")},
             {std::string("cy"), std::int64_t{40}, std::string("3")}}};
}

Decision check(const Principal& p, const std::string& text, const PolicyStore& store)
{
    return check_query(p, query::parse(text), store);
}

std::vector<std::string> column_names(const Relation& r)
{
    std::vector<std::string> out;
    for (const auto& c : r.schema.columns()) out.push_back(c.name);
    return out;
}

} // namespace

TEST(QueryControl, DefaultDeny)
{
    PolicyStore empty;
    Principal p{"p", {"analyst"}, {}};
    auto d = check(p, "REL(SELECT * FROM t)", empty);
    EXPECT_EQ(d.verdict, Verdict::deny);
    EXPECT_NE(d.reason.find("no policy"), std::string::npos);
    EXPECT_THROW(apply_view(p, "person", person(), empty), AccessDenied);
}

TEST(QueryControl, IslandNotAllowedNamesIsland)
{
    PolicyStore s;
    s.add_query_policy({"r", {IslandTag::REL}, std::nullopt, std::nullopt, false});
    auto d = check({"p", {"r"}, {}}, "KV(SCAN t)", s);
    EXPECT_EQ(d.verdict, Verdict::deny);
    EXPECT_NE(d.reason.find("KV"), std::string::npos);
    EXPECT_EQ(check({"p", {"r"}, {}}, "REL(SELECT * FROM CAST(KV(SCAN t), REL))", s).verdict, Verdict::deny);
}

TEST(QueryControl, RequiredLimitWithinMax)
{
    PolicyStore s;
    s.add_query_policy({"r", {IslandTag::REL}, std::nullopt, 10, true});
    Principal p{"p", {"r"}, {}};
    auto ok = check(p, "REL(SELECT * FROM t LIMIT 5)", s);
    EXPECT_EQ(ok.verdict, Verdict::allow);
    EXPECT_EQ(ok.max_result_rows, 10u);
    EXPECT_EQ(check(p, "REL(SELECT * FROM t)", s).verdict, Verdict::deny);
    EXPECT_EQ(check(p, "REL(SELECT * FROM t LIMIT 11)", s).verdict, Verdict::deny);
    EXPECT_EQ(check(p, "REL(SELECT * FROM t LIMIT 10)", s).verdict, Verdict::allow);
}

TEST(QueryControl, TableUnionAcrossRoles)
{
    PolicyStore s;
    s.add_query_policy({"r1", {IslandTag::REL}, std::set<std::string>{"a"}, std::nullopt, false});
    s.add_query_policy({"r2", {IslandTag::REL}, std::set<std::string>{"b"}, std::nullopt, false});
    auto q = "REL(SELECT * FROM CAST(REL(SELECT * FROM b), REL))";
    EXPECT_EQ(check({"p", {"r1"}, {}}, "REL(SELECT * FROM b)", s).verdict, Verdict::deny);
    EXPECT_EQ(check({"p", {"r1", "r2"}, {}}, "REL(SELECT * FROM a)", s).verdict, Verdict::allow);
    EXPECT_EQ(check({"p", {"r1", "r2"}, {}}, q, s).verdict, Verdict::allow);
}

TEST(QueryControl, MergedLimitsAreMostPermissive)
{
    PolicyStore s;
    s.add_query_policy({"small", {IslandTag::REL}, std::nullopt, 5, true});
    s.add_query_policy({"big", {IslandTag::REL}, std::nullopt, 50, true});
    s.add_query_policy({"free", {IslandTag::REL}, std::nullopt, std::nullopt, false});
    EXPECT_EQ(check({"p", {"small", "big"}, {}}, "REL(SELECT * FROM t LIMIT 40)", s).max_result_rows, 50u);
    auto waived = check({"p", {"small", "free"}, {}}, "REL(SELECT * FROM t)", s);
    EXPECT_EQ(waived.verdict, Verdict::allow);
    EXPECT_FALSE(waived.max_result_rows);
}

TEST(ResultLimit, AbortsAtLimitPlusOne)
{
    std::vector<int> twelve(12, 1);
    try {
        enforce_result_limit(twelve, 10);
        FAIL();
    } catch (const LimitExceeded& e) {
        EXPECT_EQ(e.limit(), 10u);
        EXPECT_NE(std::string(e.what()).find("row 11"), std::string::npos);
    }
    EXPECT_EQ(enforce_result_limit(std::vector<int>(10, 1), 10).size(), 10u);
    EXPECT_EQ(enforce_result_limit(std::vector<int>(100000, 1), std::nullopt).size(), 100000u);
}

TEST(ResultLimit, LimiterCountsIncrementally)
{
    ResultLimiter limiter(3);
    limiter.admit();
    limiter.admit(2);
    EXPECT_EQ(limiter.count(), 3u);
    EXPECT_THROW(limiter.admit(), LimitExceeded);
}

TEST(ViewControl, ProjectsAllowedColumns)
{
    PolicyStore s;
    s.add_view_policy({"analyst", "person", std::set<std::string>{"name"}, {}});
    auto out = apply_view({"p", {"analyst"}, {}}, "person", person(), s);
    EXPECT_EQ(column_names(out), (std::vector<std::string>{"name"}));
    EXPECT_EQ(out.rows.size(), 3u);
}

TEST(ViewControl, ColumnUnionAndRowPredicates)
{
    PolicyStore s;
    s.add_view_policy({"r1", "person", std::set<std::string>{"name"}, {{"age", CompareOp::lt, std::int64_t{30}}}});
    s.add_view_policy({"r2", "person", std::set<std::string>{"age"}, {{"age", CompareOp::gt, std::int64_t{35}}}});
    auto out = apply_view({"p", {"r1", "r2"}, {}}, "person", person(), s);
    EXPECT_EQ(column_names(out), (std::vector<std::string>{"name", "age"}));
    EXPECT_EQ(out.rows, (std::vector<Row>{{std::string("ann"), std::int64_t{25}}, {std::string("cy"), std::int64_t{40}}}));
    EXPECT_THROW(apply_view({"p", {"r1"}, {}}, "other", person(), s), AccessDenied);
}

TEST(ViewControl, RandomizedRoleAdditionIsMonotone)
{
    std::mt19937_64 rng(31);
    const char* cols[] = {"name", "age", "ssn"};
    for (int trial = 0; trial < 200; ++trial) {
        PolicyStore s;
        std::vector<std::string> roles;
        for (int r = 0; r < 4; ++r) {
            auto role = "r" + std::to_string(r);
            roles.push_back(role);
            std::optional<std::set<std::string>> allowed;
            if (rng() % 4) {
                allowed.emplace();
                for (auto c : cols)
                    if (rng() % 2) allowed->insert(c);
            }
            Predicate pred;
            if (rng() % 2) pred.push_back({"age", CompareOp::gt, static_cast<std::int64_t>(20 + rng() % 25)});
            if (rng() % 3) s.add_view_policy({role, "person", allowed, pred});
            std::set<IslandTag> islands;
            if (rng() % 2) islands.insert(IslandTag::REL);
            if (rng() % 2) islands.insert(IslandTag::KV);
            std::optional<std::set<std::string>> tables;
            if (rng() % 2) tables = std::set<std::string>{rng() % 2 ? "person" : "other"};
            s.add_query_policy({role, islands, tables, std::nullopt, false});
        }
        std::set<std::string> base;
        for (const auto& r : roles)
            if (rng() % 2) base.insert(r);
        auto extra = roles[rng() % roles.size()];
        Principal small{"p", base, {}};
        Principal large{"p", base, {}};
        large.roles.insert(extra);

        for (const char* q : {"REL(SELECT * FROM person)", "KV(SCAN person)", "REL(SELECT * FROM other)"}) {
            if (check(small, q, s).allowed()) {
                ASSERT_TRUE(check(large, q, s).allowed()) << q;
            }
        }
        Relation small_view, large_view;
        bool small_ok = true;
        try {
            small_view = apply_view(small, "person", person(), s);
        } catch (const AccessDenied&) {
            small_ok = false;
        }
        if (!small_ok) continue;
        large_view = apply_view(large, "person", person(), s);
        for (const auto& c : small_view.schema.columns()) ASSERT_TRUE(large_view.schema.index_of(c.name)) << c.name;
        ASSERT_GE(large_view.rows.size(), small_view.rows.size());
    }
}

TEST(PrincipalAuths, Verbatim)
{
    EXPECT_EQ(principal_auths({"p", {}, {"a", "b"}}), (AuthSet{"a", "b"}));
    EXPECT_TRUE(principal_auths({"p", {}, {}}).empty());
}

TEST(PrincipalAuths, ComposedWithScanEqualsVisibilityFilter)
{
    KeyValueEngine kv("kv1");
    kv.put("t", {{"1", "c", "", "open"}, {"2", "c", "a", "a"}, {"3", "c", "a&b", "ab"}, {"4", "c", "b|c", "bc"}});
    Principal p{"p", {}, {"b"}};
    auto out = kv.scan("t", std::nullopt, std::nullopt, principal_auths(p));
    std::vector<std::string> values;
    for (const auto& e : out) values.push_back(e.value);
    EXPECT_EQ(values, (std::vector<std::string>{"open", "bc"}));
}

TEST(PolicyStore, InvariantsAndJsonRoundTrip)
{
    PolicyStore s;
    s.add_principal({"alice", {"analyst"}, {"a"}});
    EXPECT_THROW(s.add_principal({"alice", {}, {}}), Error);
    EXPECT_THROW(s.add_principal({"bad", {}, {"no-dash"}}), Error);
    s.add_view_policy({"analyst", "t", std::nullopt, {{"a", CompareOp::ge, 1.5}}});
    EXPECT_THROW(s.add_view_policy({"analyst", "t", std::nullopt, {}}), Error);
    s.add_query_policy({"analyst", {IslandTag::REL}, std::set<std::string>{"t"}, 10, true});
    EXPECT_THROW(s.add_query_policy({"analyst", {}, std::nullopt, std::nullopt, false}), Error);
    EXPECT_THROW(s.add_query_policy({"zero", {}, std::nullopt, 0, false}), Error);

    auto back = PolicyStore::from_json(s.to_json());
    EXPECT_EQ(back.to_json(), s.to_json());
    EXPECT_EQ(back.principal("alice")->auths, (AuthSet{"a"}));
}

TEST(PolicyStore, LoadsFileFormat)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "p.json", R"({
      "principals": [{"id": "alice", "roles": ["analyst"], "auths": ["public"]}],
      "view_policies": [{"role": "analyst", "table": "person", "allowed_columns": "ALL",
                         "row_predicate": [{"column": "age", "op": ">", "value": 30}]}],
      "query_policies": [{"role": "analyst", "allowed_islands": ["REL", "KV"], "table_allowlist": "ALL",
                          "max_result_rows": 100, "require_limit": false}]
    })");
    auto s = PolicyStore::load(dir / "p.json");
    auto alice = *s.principal("alice");
    auto out = apply_view(alice, "person", person(), s);
    EXPECT_EQ(out.rows.size(), 2u);
    EXPECT_EQ(check(alice, "KV(SCAN w)", s).max_result_rows, 100u);

    test_support::write_text(dir / "bad.json", R"({"principals": [{"roles": []}]})");
    EXPECT_THROW(PolicyStore::load(dir / "bad.json"), Error);
}
