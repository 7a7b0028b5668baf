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

#include "polyhub/hub/ingest.hpp"

#include <algorithm>
#include <cctype>

#include "polyhub/error.hpp"
#include "polyhub/formats.hpp"
#include "polyhub/text.hpp"

namespace polyhub::hub {

using engines::Cell;
using engines::ColumnType;
using nlohmann::json;

IngestSpec ingest_spec_from_json(const json& doc)
{
    if (!doc.is_object()) throw Error(Errc::invalid_argument, "ingest spec must be a JSON object");
    IngestSpec spec;
    try {
        spec.source = doc.at("source").get<std::string>();
        auto format = text::to_lower(doc.at("format").get<std::string>());
        if (format == "csv") spec.format = SourceFormat::csv;
        else if (format == "jsonl") spec.format = SourceFormat::jsonl;
        else throw Error(Errc::invalid_argument, "format must be csv or jsonl, got '" + format + "'");
        spec.island = islands::island_tag_from_string(doc.at("island").get<std::string>());
        spec.engine = doc.at("engine").get<std::string>();
        spec.table = doc.at("table").get<std::string>();
        if (doc.contains("drop_columns") && !doc["drop_columns"].is_null())
            spec.drop_columns = doc["drop_columns"].get<std::set<std::string>>();
        if (doc.contains("key_column") && !doc["key_column"].is_null())
            spec.key_column = doc["key_column"].get<std::string>();
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed ingest spec: ") + e.what());
    }
    if (spec.table.empty()) throw Error(Errc::invalid_argument, "ingest spec needs a table name");
    return spec;
}

json ingest_spec_to_json(const IngestSpec& spec)
{
    json doc{{"source", spec.source.string()},
             {"format", spec.format == SourceFormat::csv ? "csv" : "jsonl"},
             {"island", islands::to_string(spec.island)},
             {"engine", spec.engine},
             {"table", spec.table},
             {"drop_columns", spec.drop_columns}};
    doc["key_column"] = spec.key_column ? json(*spec.key_column) : json(nullptr);
    return doc;
}

json to_json(const IngestReport& r)
{
    return {{"rows_parsed", r.rows_parsed},
            {"rows_loaded", r.rows_loaded},
            {"columns_dropped", r.columns_dropped},
            {"columns", r.columns},
            {"dataset_id", r.dataset_id}};
}

namespace {

// CSV fields are untyped text; JSON values carry their own type.
struct RawCell {
    Cell value;
    bool untyped = false;
};

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<RawCell>> rows;
    std::vector<std::size_t> line_numbers;
};

RawCell from_json_value(const nlohmann::ordered_json& v)
{
    if (v.is_null()) return {};
    if (v.is_string()) return {v.get<std::string>(), false};
    if (v.is_number_integer()) {
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            return {static_cast<double>(v.get<std::uint64_t>()), false};
        return {v.get<std::int64_t>(), false};
    }
    if (v.is_number_float()) return {v.get<double>(), false};
    if (v.is_boolean()) return {std::string(v.get<bool>() ? "true" : "false"), false};
    return {v.dump(), false};
}

RawTable read_csv(const std::string& bytes)
{
    auto csv = formats::parse_csv(bytes);
    RawTable raw;
    raw.header = csv.header;
    raw.line_numbers = csv.line_numbers;
    for (const auto& record : csv.records) {
        std::vector<RawCell> row;
        for (const auto& field : record) row.push_back(field ? RawCell{*field, true} : RawCell{});
        raw.rows.push_back(std::move(row));
    }
    return raw;
}

RawTable read_jsonl(const std::string& bytes)
{
    auto lines = formats::parse_jsonl(bytes);
    RawTable raw;
    raw.header = formats::jsonl_keys(lines);
    raw.line_numbers = lines.line_numbers;
    for (const auto& record : lines.records) {
        std::vector<RawCell> row;
        for (const auto& key : raw.header) {
            auto it = record.find(key);
            row.push_back(it == record.end() ? RawCell{} : from_json_value(*it));
        }
        raw.rows.push_back(std::move(row));
    }
    return raw;
}

bool fits_int(const RawCell& c)
{
    if (c.untyped) return text::parse_int64(std::get<std::string>(c.value)).has_value();
    return std::holds_alternative<std::int64_t>(c.value);
}

bool fits_float(const RawCell& c)
{
    if (c.untyped) return text::parse_double(std::get<std::string>(c.value)).has_value();
    return std::holds_alternative<std::int64_t>(c.value) || std::holds_alternative<double>(c.value);
}

ColumnType infer(const RawTable& raw, std::size_t col)
{
    bool all_int = true;
    bool all_float = true;
    bool any = false;
    for (const auto& row : raw.rows) {
        const auto& c = row[col];
        if (std::holds_alternative<std::monostate>(c.value)) continue;
        any = true;
        all_int = all_int && fits_int(c);
        all_float = all_float && fits_float(c);
    }
    if (!any) return ColumnType::text;
    if (all_int) return ColumnType::int64;
    if (all_float) return ColumnType::float64;
    return ColumnType::text;
}

Cell coerce(const RawCell& c, ColumnType type, const std::string& column, std::size_t line)
{
    if (std::holds_alternative<std::monostate>(c.value)) return {};
    auto fail = [&]() -> Cell {
        throw Error(Errc::type_mismatch, "line " + std::to_string(line) + ": column '" + column + "' expects "
                                             + std::string(engines::to_string(type)) + ", got '"
                                             + engines::render_cell(c.value) + "'");
    };
    switch (type) {
    case ColumnType::int64:
        if (c.untyped) {
            if (auto n = text::parse_int64(std::get<std::string>(c.value))) return *n;
            return fail();
        }
        if (std::holds_alternative<std::int64_t>(c.value)) return c.value;
        return fail();
    case ColumnType::float64:
        if (c.untyped) {
            if (auto d = text::parse_double(std::get<std::string>(c.value))) return *d;
            return fail();
        }
        if (auto* i = std::get_if<std::int64_t>(&c.value)) return static_cast<double>(*i);
        if (std::holds_alternative<double>(c.value)) return c.value;
        return fail();
    case ColumnType::text:
        return engines::render_cell(c.value);
    }
    return fail();
}

} // namespace

ParsedSource parse_source(const std::string& bytes, SourceFormat format, const std::set<std::string>& drop_columns,
                          const std::optional<engines::Schema>& schema)
{
    auto raw = format == SourceFormat::csv ? read_csv(bytes) : read_jsonl(bytes);

    ParsedSource out;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < raw.header.size(); ++i) {
        if (drop_columns.contains(raw.header[i])) out.columns_dropped.push_back(raw.header[i]);
        else kept.push_back(i);
    }
    if (kept.empty()) throw Error(Errc::schema_violation, "no columns left after dropping");

    // Target column index per kept source column.
    std::vector<engines::Column> columns;
    std::vector<std::size_t> target;
    if (schema) {
        columns = schema->columns();
        for (auto i : kept) {
            auto idx = schema->index_of(raw.header[i]);
            if (!idx)
                throw Error(Errc::schema_violation, "column '" + raw.header[i] + "' is not in the target table");
            target.push_back(*idx);
        }
    } else {
        for (auto i : kept) {
            target.push_back(columns.size());
            columns.push_back({raw.header[i], infer(raw, i)});
        }
    }

    std::vector<engines::Row> rows;
    rows.reserve(raw.rows.size());
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        engines::Row row(columns.size());
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const auto& col = columns[target[k]];
            row[target[k]] = coerce(raw.rows[r][kept[k]], col.type, col.name, raw.line_numbers[r]);
        }
        rows.push_back(std::move(row));
    }
    out.relation = {schema ? *schema : engines::Schema(std::move(columns)), std::move(rows)};
    out.line_numbers = std::move(raw.line_numbers);
    return out;
}

std::map<std::string, std::size_t> scan_wordcount(const std::vector<std::filesystem::path>& paths)
{
    std::vector<std::string> contents;
    for (const auto& p : paths) {
        try {
            contents.push_back(formats::read_file(p));
        } catch (const Error& e) {
            throw Error(Errc::io_error, "cannot read " + p.string() + ": " + e.what());
        }
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& bytes : contents) {
        std::string word;
        for (char ch : bytes) {
            if (std::isspace(static_cast<unsigned char>(ch))) {
                if (!word.empty()) ++counts[text::to_lower(word)];
                word.clear();
            } else {
                word += ch;
            }
        }
        if (!word.empty()) ++counts[text::to_lower(word)];
    }
    return counts;
}

} // namespace polyhub::hub
