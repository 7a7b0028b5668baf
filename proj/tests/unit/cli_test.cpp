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

#include <sys/wait.h>

#include <cstdio>
#include <regex>

#include "hub_fixture.hpp"
#include "polyhub/formats.hpp"

using namespace polyhub;

namespace {

struct Run {
    int exit_code = -1;
    std::string output; // stdout and stderr
};

std::string quote(const std::string& arg)
{
    std::string out = "'";
    for (char c : arg) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

Run run(const std::vector<std::string>& args)
{
    std::string command = quote(POLYHUB_CLI_PATH);
    for (const auto& a : args) command += " " + quote(a);
    command += " 2>&1";
    Run result;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST(Cli, CapacityOfSixPetabytes)
{
    auto r = run({"capacity", "6000000000000000", "0.3333"});
    ASSERT_EQ(r.exit_code, 0) << r.output;
    std::smatch m;
    ASSERT_TRUE(std::regex_search(r.output, m, std::regex(R"(^(\d+) bytes)")));
    double bytes = std::stod(m[1]);
    EXPECT_NEAR(bytes, 4e15, 0.03 * 4e15);
    EXPECT_TRUE(contains(r.output, "PB"));
    EXPECT_NE(run({"capacity", "100", "1.5"}).exit_code, 0);
}

TEST(Cli, UsageErrors)
{
    auto unknown = run({"frobnicate"});
    EXPECT_EQ(unknown.exit_code, 2);
    EXPECT_TRUE(contains(unknown.output, "frobnicate"));
    EXPECT_TRUE(contains(unknown.output, "Usage") || contains(unknown.output, "usage")) << unknown.output;
    EXPECT_EQ(run({}).exit_code, 2);
    EXPECT_EQ(run({"query", "KV(SCAN w)"}).exit_code, 2);
}

TEST(Cli, ParseErrorReportsPosition)
{
    test_support::TempDir dir;
    auto r = run({"--data-dir", (dir / "data").string(), "explain", "KV(SCAN)"});
    EXPECT_NE(r.exit_code, 0);
    EXPECT_TRUE(contains(r.output, "position 8")) << r.output;
}

TEST(Cli, QueryExplainAndDeny)
{
    test_support::TempDir dir;
    auto config = test_support::fixture_config(dir);
    {
        hub::Hub h(config);
        test_support::seed_wordcounts(h);
        h.shutdown();
    }
    test_support::write_text(dir / "hub.conf", "data_dir = " + config.data_dir.string() + "\n");

    auto explain = run({"-c", (dir / "hub.conf").string(), "explain", test_support::cross_island_query});
    ASSERT_EQ(explain.exit_code, 0) << explain.output;
    auto rel_at = explain.output.find("REL:rel1");
    auto kv_at = explain.output.find("\n  KV:kv1 kv_scan(w)");
    ASSERT_NE(rel_at, std::string::npos) << explain.output;
    ASSERT_NE(kv_at, std::string::npos) << explain.output;
    EXPECT_LT(rel_at, kv_at);

    auto query = run({"-c", (dir / "hub.conf").string(), "query", "-p", "alice", test_support::cross_island_query});
    ASSERT_EQ(query.exit_code, 0) << query.output;
    auto doc = nlohmann::json::parse(query.output);
    EXPECT_EQ(doc["rows"], nlohmann::json::parse(R"([["apple"],["date"]])"));

    auto denied = run({"-c", (dir / "hub.conf").string(), "query", "-p", "bob", "KV(SCAN w)"});
    EXPECT_EQ(denied.exit_code, 1);
    EXPECT_TRUE(contains(denied.output, "access_denied")) << denied.output;
}

TEST(Cli, IngestThenCatalogCommands)
{
    test_support::TempDir dir;
    auto data = (dir / "data").string();
    test_support::write_text(dir / "people.csv", "id,name,age\n1,ann,30\n2,bob,41\n");
    test_support::write_text(dir / "spec.json", nlohmann::json{{"source", (dir / "people.csv").string()},
                                                               {"format", "csv"},
                                                               {"island", "REL"},
                                                               {"engine", "rel1"},
                                                               {"table", "people"}}
                                                    .dump());
    auto ingest = run({"--data-dir", data, "ingest", (dir / "spec.json").string()});
    ASSERT_EQ(ingest.exit_code, 0) << ingest.output;
    EXPECT_EQ(nlohmann::json::parse(ingest.output)["rows_loaded"], 2);
    EXPECT_TRUE(std::filesystem::exists(dir / "data" / "rel1.snap"));

    auto search = run({"--data-dir", data, "catalog", "search", "age"});
    ASSERT_EQ(search.exit_code, 0) << search.output;
    EXPECT_TRUE(contains(search.output, "people"));

    test_support::write_text(dir / "copy" / "people.csv", "id,name,age\n1,ann,30\n2,bob,41\n");
    auto crawl = run({"--data-dir", data, "crawl", (dir / "copy").string()});
    ASSERT_EQ(crawl.exit_code, 0) << crawl.output;
    EXPECT_TRUE(contains(crawl.output, "duplicate"));

    EXPECT_EQ(run({"--data-dir", data, "catalog", "duplicates"}).exit_code, 0);
    EXPECT_EQ(run({"--data-dir", data, "catalog", "stale", "30"}).exit_code, 0);
    EXPECT_NE(run({"--data-dir", data, "catalog", "stale", "0"}).exit_code, 0);
}

TEST(Cli, DuaRenderAndWordcount)
{
    auto dua = run({"dua", "render", std::string(POLYHUB_TEST_SOURCE_DIR) + "/fixtures/dua_full.json"});
    ASSERT_EQ(dua.exit_code, 0) << dua.output;
    EXPECT_EQ(dua.output, formats::read_file(std::string(POLYHUB_TEST_SOURCE_DIR) + "/golden/dua_full.txt"));

    test_support::TempDir dir;
    test_support::write_text(dir / "a.txt", "a A b");
    auto wc = run({"wordcount", (dir / "a.txt").string()});
    ASSERT_EQ(wc.exit_code, 0) << wc.output;
    EXPECT_TRUE(contains(wc.output, "a")) << wc.output;
    EXPECT_NE(run({"wordcount", (dir / "missing.txt").string()}).exit_code, 0);
}
