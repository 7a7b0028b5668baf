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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyhub/engines/relation.hpp"
#include "polyhub/islands/associative.hpp"

namespace polyhub::hub {

enum class SourceFormat { csv, jsonl };

struct IngestSpec {
    std::filesystem::path source;
    SourceFormat format = SourceFormat::csv;
    islands::IslandTag island = islands::IslandTag::REL;
    std::string engine;
    std::string table;
    std::set<std::string> drop_columns;
    std::optional<std::string> key_column;
};

struct IngestReport {
    std::size_t rows_parsed = 0;
    std::size_t rows_loaded = 0;
    std::vector<std::string> columns_dropped;
    std::vector<std::string> columns;
    std::string dataset_id;
};

/// {source, format, island, engine, table, drop_columns?, key_column?}.
/// Throws Errc::invalid_argument.
IngestSpec ingest_spec_from_json(const nlohmann::json& doc);
nlohmann::json ingest_spec_to_json(const IngestSpec& spec);
nlohmann::json to_json(const IngestReport& report);

/// Source parsed into a typed relation, before any engine is touched.
struct ParsedSource {
    engines::Relation relation;
    std::vector<std::string> columns_dropped;
    std::vector<std::size_t> line_numbers; // per row
};

/// Parses CSV (header on the first line) or JSON lines (schema = union of
/// keys, missing keys are null), removes drop_columns and infers column types
/// (int64, then float64, then text). When `schema` is given the values are
/// coerced to it instead. Throws Errc::parse_error / type_mismatch citing the
/// source line.
ParsedSource parse_source(const std::string& bytes, SourceFormat format, const std::set<std::string>& drop_columns,
                          const std::optional<engines::Schema>& schema = std::nullopt);

/// Whitespace tokens, case-folded, counted across all files.
std::map<std::string, std::size_t> scan_wordcount(const std::vector<std::filesystem::path>& paths);

} // namespace polyhub::hub
