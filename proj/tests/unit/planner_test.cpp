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

#include <map>

#include "polyhub/engines/array.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relational.hpp"
#include "polyhub/error.hpp"
#include "polyhub/query/parser.hpp"
#include "polyhub/query/planner.hpp"

using namespace polyhub;
using namespace polyhub::engines;
using namespace polyhub::query;

namespace {

class FixedLocator final : public ObjectLocator {
public:
    std::map<std::pair<IslandTag, std::string>, std::vector<std::string>> holders;
    std::vector<std::string> engines_holding(IslandTag island, const std::string& object) const override
    {
        auto it = holders.find({island, object});
        return it == holders.end() ? std::vector<std::string>{} : it->second;
    }
};

struct Fixture {
    islands::Registry registry;
    FixedLocator locator;
    Monitor monitor;

    Fixture()
    {
        registry.register_engine(IslandTag::REL, std::make_shared<RelationalEngine>("e1"));
        registry.register_engine(IslandTag::REL, std::make_shared<RelationalEngine>("e2"));
        registry.register_engine(IslandTag::KV, std::make_shared<KeyValueEngine>("kv1"));
        locator.holders[{IslandTag::REL, "t"}] = {"e1", "e2"};
        locator.holders[{IslandTag::REL, "only2"}] = {"e2"};
        locator.holders[{IslandTag::KV, "w"}] = {"kv1"};
    }

    Plan make(const std::string& text) { return plan(parse(text), registry, locator, monitor); }
    void seed(const std::string& engine, double ms, int n)
    {
        for (int i = 0; i < n; ++i) monitor.append({"s", IslandTag::REL, engine, ms, 0, 0});
    }
};

void check_bindings(const PlanStep& step, const islands::Registry& registry)
{
    auto bound = registry.engines_of(step.island);
    ASSERT_NE(std::find(bound.begin(), bound.end(), step.engine), bound.end());
    for (const auto& child : step.children) check_bindings(child.step, registry);
}

} // namespace

TEST(Planner, SingleHolderIsChosen)
{
    Fixture f;
    f.seed("e1", 1, 5);
    EXPECT_EQ(f.make("REL(SELECT * FROM only2)").root.engine.id, "e2");
}

TEST(Planner, LowestAverageWins)
{
    Fixture f;
    f.seed("e1", 9, 20);
    f.seed("e2", 5, 20);
    EXPECT_EQ(f.make("REL(SELECT * FROM t)").root.engine.id, "e2");
}

TEST(Planner, NoHistoryFallsBackToRegistrationOrder)
{
    Fixture f;
    EXPECT_EQ(f.make("REL(SELECT * FROM t)").root.engine.id, "e1");
    std::vector<std::string> reversed{"e2", "e1"};
    EXPECT_EQ(choose_engine(reversed, f.monitor), "e2");
}

TEST(Planner, EngineWithHistoryBeatsEngineWithout)
{
    Fixture f;
    f.seed("e2", 50, 3);
    EXPECT_EQ(f.make("REL(SELECT * FROM t)").root.engine.id, "e2");
}

TEST(Planner, TiesGoToEarliestRegistered)
{
    Fixture f;
    f.seed("e1", 5, 4);
    f.seed("e2", 5, 4);
    EXPECT_EQ(f.make("REL(SELECT * FROM t)").root.engine.id, "e1");
}

TEST(Planner, UnknownObjectNamesTheTable)
{
    Fixture f;
    try {
        f.make("REL(SELECT * FROM nope)");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::plan_error);
        EXPECT_NE(std::string(e.what()).find("'nope'"), std::string::npos);
    }
}

TEST(Planner, IslandWithoutEnginesIsAnError)
{
    Fixture f;
    EXPECT_THROW(f.make("ARR(SUB A[0:1])"), Error);
}

TEST(Planner, CastBecomesChildStep)
{
    Fixture f;
    auto p = f.make("REL(SELECT _row FROM CAST(KV(SCAN w), REL) WHERE count > 5)");
    EXPECT_EQ(p.root.island, IslandTag::REL);
    ASSERT_EQ(p.root.children.size(), 1u);
    EXPECT_EQ(p.root.children[0].step.island, IslandTag::KV);
    EXPECT_EQ(p.root.children[0].step.engine.id, "kv1");
    EXPECT_EQ(p.root.children[0].target, IslandTag::REL);
    EXPECT_EQ(std::get<islands::RelSelect>(p.root.op).mode, CompareMode::lenient);
    EXPECT_FALSE(p.root.base_object);
    check_bindings(p.root, f.registry);
    EXPECT_EQ(explain(p), "REL:e1 rel_select(__cast_0, cols=[_row], where=[count > 5])\n  KV:kv1 kv_scan(w)\n");
}

TEST(Planner, DeterministicForSameState)
{
    Fixture f;
    f.seed("e1", 3, 2);
    f.seed("e2", 7, 2);
    auto first = explain(f.make("REL(SELECT * FROM CAST(KV(SCAN w), REL))"));
    for (int i = 0; i < 50; ++i) ASSERT_EQ(explain(f.make("REL(SELECT * FROM CAST(KV(SCAN w), REL))")), first);
}

TEST(Planner, EngineProbeFindsObjects)
{
    islands::Registry registry;
    auto e1 = std::make_shared<RelationalEngine>("e1");
    auto a1 = std::make_shared<ArrayEngine>("a1");
    e1->apply({CreateTable{"t", Schema({{"a", ColumnType::int64}})}});
    a1->create("A", {{"i", 1}});
    registry.register_engine(IslandTag::REL, e1);
    registry.register_engine(IslandTag::REL, std::make_shared<RelationalEngine>("e2"));
    registry.register_engine(IslandTag::ARR, a1);
    EngineProbe probe(registry);
    EXPECT_EQ(probe.engines_holding(IslandTag::REL, "t"), (std::vector<std::string>{"e1"}));
    EXPECT_EQ(probe.engines_holding(IslandTag::ARR, "A"), (std::vector<std::string>{"a1"}));
    EXPECT_TRUE(probe.engines_holding(IslandTag::KV, "t").empty());
}
