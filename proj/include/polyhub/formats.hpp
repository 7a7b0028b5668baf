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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polyhub::formats {

/// Parsed CSV: the header plus raw fields. `line_numbers[i]` is the 1-based
/// source line on which record i starts.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<std::string>>> records; // nullopt = empty unquoted field
    std::vector<std::size_t> line_numbers;
};

/// RFC 4180-style CSV: comma separated, double-quote quoting with "" escape,
/// quoted fields may span lines, CRLF tolerated. Every record must have as
/// many fields as the header. Throws Errc::parse_error citing the line.
CsvTable parse_csv(std::string_view content);

/// Header line only; used by the crawler.
std::vector<std::string> csv_header(std::string_view content);

struct JsonLines {
    std::vector<nlohmann::ordered_json> records;
    std::vector<std::size_t> line_numbers;
};

/// One JSON object per non-blank line. Throws Errc::parse_error citing the line.
JsonLines parse_jsonl(std::string_view content, std::size_t max_records = static_cast<std::size_t>(-1));

/// Union of keys over the first `max_records` records, in first-seen order.
std::vector<std::string> jsonl_keys(const JsonLines& lines, std::size_t max_records = static_cast<std::size_t>(-1));

/// Whole file as bytes; throws Errc::io_error.
std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

} // namespace polyhub::formats
