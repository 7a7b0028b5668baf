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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "polyhub/engines/engine.hpp"

namespace polyhub::hub {

struct HubConfig {
    std::filesystem::path data_dir = "polyhub-data";
    bool snapshot_on_shutdown = true;
    std::size_t monitor_window = 20;
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Empty means <data_dir>/policies.json when that file exists.
    std::filesystem::path policy_file;
    /// Empty means <data_dir>/catalog.json.
    std::filesystem::path catalog_file;
    std::vector<engines::EngineId> engines = {{"rel1", engines::EngineKind::relational},
                                              {"kv1", engines::EngineKind::keyvalue},
                                              {"arr1", engines::EngineKind::array}};

    /// Throws Errc::invalid_argument.
    void validate() const;
    std::filesystem::path resolved_policy_file() const;
    std::filesystem::path resolved_catalog_file() const;
};

/// `key = value` lines; blank lines and lines starting with '#' are ignored.
/// Keys: data_dir, snapshot_on_shutdown, monitor_window, host, port,
/// policy_file, catalog_file, engines ("id:kind,id:kind").
/// Throws Errc::invalid_argument naming the line.
HubConfig parse_config(std::string_view text);
HubConfig load_config(const std::filesystem::path& path);

} // namespace polyhub::hub
