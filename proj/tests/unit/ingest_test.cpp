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

#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relational.hpp"
#include "polyhub/error.hpp"
#include "polyhub/formats.hpp"
#include "polyhub/hub/hub.hpp"
#include "support.hpp"

using namespace polyhub;
using namespace polyhub::hub;
using namespace polyhub::engines;
using islands::IslandTag;

namespace {

HubConfig config_in(const std::filesystem::path& dir)
{
    HubConfig c;
    c.data_dir = dir / "data";
    return c;
}

IngestSpec rel_spec(const std::filesystem::path& source, const std::string& table, SourceFormat format = SourceFormat::csv)
{
    IngestSpec s;
    s.source = source;
    s.format = format;
    s.island = IslandTag::REL;
    s.engine = "rel1";
    s.table = table;
    return s;
}

} // namespace

TEST(Ingest, CsvWithDroppedColumn)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "people.csv", "id,name,age\n1,ann,30\n2,bob,41\n3,cy,\n");
    Hub h(config_in(dir.path()));
    auto spec = rel_spec(dir / "people.csv", "people");
    spec.drop_columns = {"id"};
    auto report = h.ingest(spec);
    EXPECT_EQ(report.rows_parsed, 3u);
    EXPECT_EQ(report.rows_loaded, 3u);
    EXPECT_EQ(report.columns_dropped, (std::vector<std::string>{"id"}));

    auto rel = as_relational(h.engine("rel1"))->select({"people", {}, {}, {}});
    EXPECT_EQ(rel.schema.columns(), (std::vector<Column>{{"name", ColumnType::text}, {"age", ColumnType::int64}}));
    EXPECT_EQ(rel.rows.size(), 3u);
    EXPECT_EQ(rel.rows[2][1], Cell{});

    auto entry = h.catalog().get(report.dataset_id);
    ASSERT_TRUE(entry);
    EXPECT_EQ(entry->checksum, formats::sha256_hex(formats::read_file(dir / "people.csv")));
    EXPECT_EQ(entry->locations, (std::vector<catalog::Location>{{IslandTag::REL, "rel1", "people"}}));
    EXPECT_TRUE(entry->metatags.contains("age"));
    EXPECT_FALSE(entry->metatags.contains("id"));
}

TEST(Ingest, JsonLinesUnionSchemaFillsNulls)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "p.jsonl", "{\"name\":\"ann\",\"age\":30}\n{\"name\":\"bob\"}\n{\"name\":\"cy\",\"age\":2.5,\"x\":true}\n");
    Hub h(config_in(dir.path()));
    h.ingest(rel_spec(dir / "p.jsonl", "p", SourceFormat::jsonl));
    auto rel = as_relational(h.engine("rel1"))->select({"p", {}, {}, {}});
    EXPECT_EQ(rel.schema.columns(),
              (std::vector<Column>{{"name", ColumnType::text}, {"age", ColumnType::float64}, {"x", ColumnType::text}}));
    EXPECT_EQ(rel.rows[1][1], Cell{});
    EXPECT_EQ(rel.rows[2][2], Cell{std::string("true")});
}

TEST(Ingest, MalformedLineCitedAndNothingLoaded)
{
    test_support::TempDir dir;
    std::string content = "a,b\n";
    for (int line = 2; line <= 20; ++line) content += line == 17 ? "1,2,3\n" : "1,2\n";
    test_support::write_text(dir / "bad.csv", content);
    test_support::write_text(dir / "good.csv", "a,b\n5,6\n");
    Hub h(config_in(dir.path()));
    h.ingest(rel_spec(dir / "good.csv", "t"));
    auto catalog_before = h.catalog().entries();
    auto rows_before = as_relational(h.engine("rel1"))->row_count("t");
    try {
        h.ingest(rel_spec(dir / "bad.csv", "t"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 17"), std::string::npos) << e.what();
    }
    EXPECT_EQ(as_relational(h.engine("rel1"))->row_count("t"), rows_before);
    EXPECT_EQ(h.catalog().entries(), catalog_before);
}

TEST(Ingest, TypeErrorAgainstExistingTableCitesLine)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "a.csv", "n\n1\n2\n");
    test_support::write_text(dir / "b.csv", "n\n3\nfour\n");
    Hub h(config_in(dir.path()));
    h.ingest(rel_spec(dir / "a.csv", "t"));
    try {
        h.ingest(rel_spec(dir / "b.csv", "t"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::type_mismatch);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_EQ(as_relational(h.engine("rel1"))->row_count("t"), 2u);
    test_support::write_text(dir / "c.csv", "n\n7\n");
    EXPECT_EQ(h.ingest(rel_spec(dir / "c.csv", "t")).rows_loaded, 1u);
    EXPECT_EQ(as_relational(h.engine("rel1"))->row_count("t"), 3u);
}

TEST(Ingest, KeyValueTargetOneEntryPerCell)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "w.csv", "word,count,note\napple,12,\nbee,3,x\n");
    Hub h(config_in(dir.path()));
    IngestSpec spec{dir / "w.csv", SourceFormat::csv, IslandTag::KV, "kv1", "w", {}, std::string("word")};
    h.ingest(spec);
    auto entries = as_keyvalue(h.engine("kv1"))->scan("w", std::nullopt, std::nullopt, {});
    std::vector<std::tuple<std::string, std::string, std::string>> got;
    for (const auto& e : entries) got.emplace_back(e.row, e.column, e.value);
    EXPECT_EQ(got, (std::vector<std::tuple<std::string, std::string, std::string>>{
                       {"apple", "count", "12"}, {"bee", "count", "3"}, {"bee", "note", "x"}}));

    IngestSpec ordinal{dir / "w.csv", SourceFormat::csv, IslandTag::KV, "kv1", "w2", {"note"}, std::nullopt};
    h.ingest(ordinal);
    auto rows = as_keyvalue(h.engine("kv1"))->scan("w2", std::nullopt, std::nullopt, {});
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].row, "r000000");
    EXPECT_EQ(rows[3].row, "r000001");
}

TEST(Ingest, UnknownTargetsAreRejected)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "a.csv", "n\n1\n");
    Hub h(config_in(dir.path()));
    auto wrong_engine = rel_spec(dir / "a.csv", "t");
    wrong_engine.engine = "kv1";
    EXPECT_THROW(h.ingest(wrong_engine), Error);
    auto missing = rel_spec(dir / "nope.csv", "t");
    EXPECT_THROW(h.ingest(missing), Error);
    auto arr = rel_spec(dir / "a.csv", "t");
    arr.island = IslandTag::ARR;
    arr.engine = "arr1";
    EXPECT_THROW(h.ingest(arr), Error);
    auto bad_key = rel_spec(dir / "a.csv", "t");
    bad_key.key_column = "zzz";
    EXPECT_THROW(h.ingest(bad_key), Error);
    EXPECT_EQ(h.catalog().size(), 0u);
}

TEST(Ingest, IngestSpecJsonRoundTrip)
{
    auto spec = ingest_spec_from_json(nlohmann::json::parse(
        R"({"source":"/d/a.csv","format":"csv","island":"KV","engine":"kv1","table":"w","drop_columns":["id"],"key_column":"word"})"));
    EXPECT_EQ(spec.island, IslandTag::KV);
    EXPECT_EQ(spec.drop_columns, (std::set<std::string>{"id"}));
    EXPECT_EQ(spec.key_column, "word");
    auto again = ingest_spec_from_json(ingest_spec_to_json(spec));
    EXPECT_EQ(again.source, spec.source);
    EXPECT_EQ(again.key_column, spec.key_column);
    EXPECT_THROW(ingest_spec_from_json(nlohmann::json::parse(R"({"source":"a","format":"xml","island":"REL","engine":"e","table":"t"})")), Error);
    EXPECT_THROW(ingest_spec_from_json(nlohmann::json::parse(R"({"format":"csv"})")), Error);
}

TEST(Wordcount, SimpleCases)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "a.txt", "a a b");
    test_support::write_text(dir / "empty.txt", "");
    EXPECT_EQ(scan_wordcount({dir / "a.txt"}), (std::map<std::string, std::size_t>{{"a", 2}, {"b", 1}}));
    EXPECT_TRUE(scan_wordcount({dir / "empty.txt"}).empty());
    try {
        scan_wordcount({dir / "a.txt", dir / "gone.txt"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("gone.txt"), std::string::npos);
    }
}

TEST(Wordcount, EqualsConcatenationOracle)
{
    test_support::TempDir dir;
    std::mt19937_64 rng(41);
    const char* words[] = {"Apple", "apple", "BEE", "bee", "cat", "dog", "x"};
    const char* gaps[] = {" ", "\n", "\t", "  ", "\r\n"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::filesystem::path> files;
        std::string concatenated;
        auto nfiles = 1 + rng() % 4;
        for (std::size_t f = 0; f < nfiles; ++f) {
            std::string content;
            auto n = rng() % 30;
            for (std::size_t i = 0; i < n; ++i) content += std::string(words[rng() % 7]) + gaps[rng() % 5];
            auto path = dir / ("f" + std::to_string(trial) + "_" + std::to_string(f));
            test_support::write_text(path, content);
            files.push_back(path);
            concatenated += content + "\n";
        }
        std::map<std::string, std::size_t> oracle;
        std::string word;
        for (char ch : concatenated + " ") {
            if (ch == ' ' || ch == '\n' || ch == '\t' || ch == '\r') {
                if (!word.empty()) {
                    for (auto& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                    ++oracle[word];
                }
                word.clear();
            } else {
                word += ch;
            }
        }
        ASSERT_EQ(scan_wordcount(files), oracle);
    }
}

TEST(Hub, SnapshotsAndCatalogSurviveRestart)
{
    test_support::TempDir dir;
    test_support::write_text(dir / "a.csv", "n\n1\n2\n");
    auto config = config_in(dir.path());
    std::string id;
    {
        Hub h(config);
        id = h.ingest(rel_spec(dir / "a.csv", "t")).dataset_id;
        as_keyvalue(h.engine("kv1"))->put("w", {{"r", "c", "", "v"}});
        h.shutdown();
    }
    Hub again(config);
    EXPECT_EQ(as_relational(again.engine("rel1"))->row_count("t"), 2u);
    EXPECT_EQ(as_keyvalue(again.engine("kv1"))->entry_count("w"), 1u);
    EXPECT_TRUE(again.catalog().get(id));
    EXPECT_EQ(again.registry().stats().engine_count, 3u);
}

TEST(Hub, SnapshotDisabledKeepsEnginesEmptyAfterRestart)
{
    test_support::TempDir dir;
    auto config = config_in(dir.path());
    config.snapshot_on_shutdown = false;
    {
        Hub h(config);
        as_keyvalue(h.engine("kv1"))->put("w", {{"r", "c", "", "v"}});
        h.shutdown();
    }
    Hub again(config);
    EXPECT_FALSE(as_keyvalue(again.engine("kv1"))->has_table("w"));
}

TEST(Hub, SnapshotKindMustMatchConfig)
{
    test_support::TempDir dir;
    auto config = config_in(dir.path());
    {
        Hub h(config);
        h.snapshot();
    }
    config.engines = {{"rel1", EngineKind::keyvalue}};
    EXPECT_THROW(Hub{config}, Error);
}

TEST(Hub, QueryUsesCatalogLocations)
{
    test_support::TempDir dir;
    auto config = config_in(dir.path());
    config.engines = {{"rel1", EngineKind::relational}, {"rel2", EngineKind::relational}};
    test_support::write_text(dir / "t.csv", "n\n1\n");
    test_support::write_text(dir / "p.json", R"({"principals":[{"id":"u","roles":["r"],"auths":[]}],
      "view_policies":[{"role":"r","table":"t","allowed_columns":"ALL","row_predicate":[]}],
      "query_policies":[{"role":"r","allowed_islands":["REL"],"table_allowlist":"ALL","max_result_rows":null,"require_limit":false}]})");
    config.policy_file = dir / "p.json";
    Hub h(config);
    auto spec = rel_spec(dir / "t.csv", "t");
    spec.engine = "rel2";
    h.ingest(spec);
    EXPECT_EQ(h.plan("REL(SELECT * FROM t)").root.engine.id, "rel2");
    EXPECT_EQ(std::get<Relation>(h.query("u", "REL(SELECT * FROM t)").value).rows.size(), 1u);
    EXPECT_THROW(h.query("stranger", "REL(SELECT * FROM t)"), access::AccessDenied);
}
