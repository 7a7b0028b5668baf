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

#include "polyhub/hub/config.hpp"

#include <set>

#include "polyhub/error.hpp"
#include "polyhub/formats.hpp"
#include "polyhub/text.hpp"

namespace polyhub::hub {

void HubConfig::validate() const
{
    if (data_dir.empty()) throw Error(Errc::invalid_argument, "data_dir must not be empty");
    if (monitor_window < 1) throw Error(Errc::invalid_argument, "monitor_window must be at least 1");
    if (port < 1 || port > 65535) throw Error(Errc::invalid_argument, "port must be in [1, 65535]");
    if (engines.empty()) throw Error(Errc::invalid_argument, "at least one engine must be configured");
    std::set<std::string> ids;
    for (const auto& e : engines) {
        if (!text::is_identifier(e.id)) throw Error(Errc::invalid_argument, "bad engine id '" + e.id + "'");
        if (!ids.insert(e.id).second) throw Error(Errc::invalid_argument, "engine '" + e.id + "' configured twice");
    }
}

std::filesystem::path HubConfig::resolved_policy_file() const
{
    if (!policy_file.empty()) return policy_file;
    auto fallback = data_dir / "policies.json";
    return std::filesystem::exists(fallback) ? fallback : std::filesystem::path{};
}

std::filesystem::path HubConfig::resolved_catalog_file() const
{
    return catalog_file.empty() ? data_dir / "catalog.json" : catalog_file;
}

namespace {

bool parse_bool(std::string_view value, std::size_t line)
{
    auto v = text::to_lower(value);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw Error(Errc::invalid_argument, "line " + std::to_string(line) + ": expected a boolean, got '"
                                            + std::string(value) + "'");
}

std::int64_t parse_number(std::string_view value, std::size_t line)
{
    auto n = text::parse_int64(value);
    if (!n) throw Error(Errc::invalid_argument, "line " + std::to_string(line) + ": expected an integer, got '"
                                                    + std::string(value) + "'");
    return *n;
}

std::vector<engines::EngineId> parse_engines(std::string_view value, std::size_t line)
{
    std::vector<engines::EngineId> out;
    for (const auto& item : text::split(value, ',')) {
        auto spec = text::trim(item);
        auto colon = spec.find(':');
        if (colon == std::string_view::npos)
            throw Error(Errc::invalid_argument, "line " + std::to_string(line) + ": engine entry '" + std::string(spec)
                                                    + "' is not id:kind");
        try {
            out.push_back({std::string(text::trim(spec.substr(0, colon))),
                           engines::engine_kind_from_string(text::trim(spec.substr(colon + 1)))});
        } catch (const Error& e) {
            throw Error(Errc::invalid_argument, "line " + std::to_string(line) + ": " + e.what());
        }
    }
    return out;
}

} // namespace

HubConfig parse_config(std::string_view content)
{
    HubConfig config;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(content, '\n')) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::invalid_argument, "line " + std::to_string(line_no) + ": expected key = value");
        auto key = std::string(text::trim(line.substr(0, eq)));
        auto value = text::trim(line.substr(eq + 1));
        if (key == "data_dir") config.data_dir = std::string(value);
        else if (key == "snapshot_on_shutdown") config.snapshot_on_shutdown = parse_bool(value, line_no);
        else if (key == "monitor_window") {
            auto n = parse_number(value, line_no);
            if (n < 1) throw Error(Errc::invalid_argument, "line " + std::to_string(line_no) + ": monitor_window must be at least 1");
            config.monitor_window = static_cast<std::size_t>(n);
        }
        else if (key == "host") config.host = std::string(value);
        else if (key == "port") {
            auto n = parse_number(value, line_no);
            if (n < 1 || n > 65535) throw Error(Errc::invalid_argument, "line " + std::to_string(line_no) + ": port must be in [1, 65535]");
            config.port = static_cast<int>(n);
        }
        else if (key == "policy_file") config.policy_file = std::string(value);
        else if (key == "catalog_file") config.catalog_file = std::string(value);
        else if (key == "engines") config.engines = parse_engines(value, line_no);
        else throw Error(Errc::invalid_argument, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    config.validate();
    return config;
}

HubConfig load_config(const std::filesystem::path& path)
{
    return parse_config(formats::read_file(path));
}

} // namespace polyhub::hub
