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

#include <algorithm>
#include <random>

#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/error.hpp"
#include "support.hpp"

using namespace polyhub;
using namespace polyhub::engines;

TEST(KeyValueEngine, PutThenScan)
{
    KeyValueEngine e("kv1");
    EXPECT_EQ(e.put("t", {{"r1", "c1", "", "v1"}}), 1u);
    auto out = e.scan("t", std::nullopt, std::nullopt, {});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].value, "v1");
    EXPECT_EQ(out[0].timestamp, 1u);
}

TEST(KeyValueEngine, LatestPutWins)
{
    KeyValueEngine e("kv1");
    e.put("t", {{"r1", "c1", "", "v1"}});
    e.put("t", {{"r1", "c1", "", "v2"}});
    auto out = e.scan("t", std::nullopt, std::nullopt, {});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].value, "v2");
    EXPECT_EQ(out[0].timestamp, 2u);
}

TEST(KeyValueEngine, MalformedVisibilityRejectsWholeBatch)
{
    KeyValueEngine e("kv1");
    e.create_table("t");
    try {
        e.put("t", {{"r1", "c1", "", "ok"}, {"r2", "c1", "a&(", "bad"}});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::visibility_syntax);
    }
    EXPECT_TRUE(e.scan("t", std::nullopt, std::nullopt, {}).empty());
}

TEST(KeyValueEngine, EmptyRowOrColumnRejected)
{
    KeyValueEngine e("kv1");
    EXPECT_THROW(e.put("t", {{"", "c", "", "v"}}), Error);
    EXPECT_THROW(e.put("t", {{"r", "", "", "v"}}), Error);
}

TEST(KeyValueEngine, RowRangeIsHalfOpen)
{
    KeyValueEngine e("kv1");
    e.put("t", {{"a", "c", "", "1"}, {"b", "c", "", "2"}, {"c", "c", "", "3"}, {"d", "c", "", "4"}});
    auto out = e.scan("t", RowRange{"a", "c"}, std::nullopt, {});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].row, "a");
    EXPECT_EQ(out[1].row, "b");
    EXPECT_THROW(e.scan("t", RowRange{"d", "a"}, std::nullopt, {}), Error);
    EXPECT_THROW(e.scan("missing", std::nullopt, std::nullopt, {}), Error);
}

TEST(KeyValueEngine, LabelsHideCellsFromUnauthorizedScans)
{
    KeyValueEngine e("kv1");
    e.put("t", {{"a", "c", "s", "1"}, {"b", "c", "s", "2"}});
    EXPECT_TRUE(e.scan("t", std::nullopt, std::nullopt, {}).empty());
    EXPECT_EQ(e.scan("t", std::nullopt, std::nullopt, {"s"}).size(), 2u);
}

TEST(KeyValueEngine, RandomScansAgreeWithFilterOracle)
{
    std::mt19937_64 rng(3);
    const char* labels[] = {"", "a", "b", "a&b", "a|b", "(a|b)&c"};
    const char* cols[] = {"c1", "c2", "c3"};
    for (int trial = 0; trial < 50; ++trial) {
        KeyValueEngine e("kv1");
        std::vector<KvMutation> batch;
        for (int i = 0; i < 40; ++i) {
            std::string row(1, static_cast<char>('a' + rng() % 10));
            batch.push_back({row, cols[rng() % 3], labels[rng() % 6], std::to_string(i)});
        }
        e.put("t", batch);

        // Latest write per (row, column) survives.
        std::map<std::pair<std::string, std::string>, KvMutation> latest;
        for (const auto& m : batch) latest[{m.row, m.column}] = m;

        std::string lo(1, static_cast<char>('a' + rng() % 10));
        std::string hi(1, static_cast<char>(lo[0] + rng() % 5));
        std::vector<std::string> wanted_cols{cols[rng() % 3], cols[rng() % 3]};
        AuthSet auths;
        if (rng() % 2) auths.insert("a");
        if (rng() % 2) auths.insert("b");
        if (rng() % 2) auths.insert("c");

        auto visible = [&](const std::string& label) {
            bool a = auths.contains("a"), b = auths.contains("b"), c = auths.contains("c");
            if (label.empty()) return true;
            if (label == "a") return a;
            if (label == "b") return b;
            if (label == "a&b") return a && b;
            if (label == "a|b") return a || b;
            return (a || b) && c;
        };
        std::vector<std::pair<std::string, std::string>> expected;
        for (const auto& [key, m] : latest) {
            if (m.row < lo || m.row >= hi) continue;
            if (std::find(wanted_cols.begin(), wanted_cols.end(), m.column) == wanted_cols.end()) continue;
            if (!visible(m.visibility)) continue;
            expected.push_back(key);
        }
        auto out = e.scan("t", RowRange{lo, hi}, wanted_cols, auths);
        std::vector<std::pair<std::string, std::string>> got;
        for (const auto& entry : out) got.emplace_back(entry.row, entry.column);
        ASSERT_EQ(got, expected);
        ASSERT_TRUE(std::is_sorted(got.begin(), got.end()));
    }
}

TEST(KeyValueEngine, TimestampsIncreaseAcrossTables)
{
    KeyValueEngine e("kv1");
    e.put("x", {{"r", "c", "", "1"}});
    e.put("y", {{"r", "c", "", "2"}, {"s", "c", "", "3"}});
    auto dump = e.dump();
    EXPECT_EQ(dump["x"][0].timestamp, 1u);
    EXPECT_EQ(dump["y"][0].timestamp, 2u);
    EXPECT_EQ(dump["y"][1].timestamp, 3u);
}

TEST(KeyValueEngine, CheckpointRestoreKeepsTimestamps)
{
    test_support::TempDir dir;
    KeyValueEngine e("kv1");
    e.put("t", {{"r1", "c1", "a&b", "v1"}, {"r2", "c1", "", "v2"}});
    e.create_table("empty");
    e.checkpoint(dir / "kv.snap");
    auto restored = KeyValueEngine::restore(dir / "kv.snap");
    EXPECT_EQ(restored->dump(), e.dump());
    EXPECT_EQ(restored->table_names(), e.table_names());
    restored->put("t", {{"r3", "c1", "", "v3"}});
    EXPECT_EQ(restored->dump()["t"].back().timestamp, 3u);
}
