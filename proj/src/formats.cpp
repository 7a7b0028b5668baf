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

#include "polyhub/formats.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "polyhub/error.hpp"

namespace polyhub::formats {

namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string& what)
{
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

} // namespace

CsvTable parse_csv(std::string_view content)
{
    CsvTable table;
    std::size_t i = 0;
    std::size_t line = 1;
    bool have_header = false;

    while (i < content.size()) {
        std::size_t record_line = line;
        std::vector<std::optional<std::string>> fields;
        std::string field;
        bool quoted = false;
        bool any = false;

        // One record.
        while (true) {
            if (i >= content.size()) {
                fields.push_back(quoted || !field.empty() ? std::optional(field) : std::nullopt);
                break;
            }
            char c = content[i];
            if (c == '"' && field.empty() && !quoted) {
                quoted = true;
                ++i;
                while (true) {
                    if (i >= content.size()) fail_at(record_line, "unterminated quoted field");
                    if (content[i] == '"') {
                        if (i + 1 < content.size() && content[i + 1] == '"') {
                            field += '"';
                            i += 2;
                            continue;
                        }
                        ++i;
                        break;
                    }
                    if (content[i] == '\n') ++line;
                    field += content[i++];
                }
                if (i < content.size() && content[i] != ',' && content[i] != '\n' && content[i] != '\r')
                    fail_at(line, "unexpected character after closing quote");
                any = true;
                continue;
            }
            if (c == '"') fail_at(line, "stray quote inside unquoted field");
            if (c == ',') {
                fields.push_back(quoted || !field.empty() ? std::optional(field) : std::nullopt);
                field.clear();
                quoted = false;
                any = true;
                ++i;
                continue;
            }
            if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
            if (c == '\n' || content[i] == '\n') {
                ++i;
                ++line;
                fields.push_back(quoted || !field.empty() ? std::optional(field) : std::nullopt);
                break;
            }
            field += c;
            any = true;
            ++i;
        }

        bool blank = !any && fields.size() == 1 && !fields[0];
        if (blank) continue;
        if (!have_header) {
            for (auto& f : fields) {
                if (!f || f->empty()) fail_at(record_line, "empty column name in header");
                table.header.push_back(*f);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            fail_at(record_line, "expected " + std::to_string(table.header.size()) + " fields, got "
                                     + std::to_string(fields.size()));
        table.records.push_back(std::move(fields));
        table.line_numbers.push_back(record_line);
    }
    if (!have_header) throw Error(Errc::parse_error, "line 1: missing CSV header");
    return table;
}

std::vector<std::string> csv_header(std::string_view content)
{
    // Only the header record matters; cut at the first newline outside quotes.
    bool in_quotes = false;
    std::size_t end = content.size();
    for (std::size_t i = 0; i < content.size(); ++i) {
        if (content[i] == '"') in_quotes = !in_quotes;
        if (content[i] == '\n' && !in_quotes) {
            end = i + 1;
            break;
        }
    }
    return parse_csv(content.substr(0, end)).header;
}

JsonLines parse_jsonl(std::string_view content, std::size_t max_records)
{
    JsonLines out;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start < content.size() && out.records.size() < max_records) {
        ++line;
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        auto text = content.substr(start, end - start);
        start = end + 1;
        if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        nlohmann::ordered_json record;
        try {
            record = nlohmann::ordered_json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            fail_at(line, std::string("invalid JSON: ") + e.what());
        }
        if (!record.is_object()) fail_at(line, "expected a JSON object");
        out.records.push_back(std::move(record));
        out.line_numbers.push_back(line);
    }
    return out;
}

std::vector<std::string> jsonl_keys(const JsonLines& lines, std::size_t max_records)
{
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < lines.records.size() && i < max_records; ++i) {
        for (const auto& [key, _] : lines.records[i].items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
        }
    }
    return keys;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::io_error, "error reading " + path.string());
    return bytes;
}

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(Errc::io_error, "SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

} // namespace polyhub::formats
