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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyhub/access/policy.hpp"
#include "polyhub/catalog/catalog.hpp"
#include "polyhub/hub/config.hpp"
#include "polyhub/hub/ingest.hpp"
#include "polyhub/islands/registry.hpp"
#include "polyhub/query/executor.hpp"
#include "polyhub/query/monitor.hpp"
#include "polyhub/query/planner.hpp"

namespace polyhub::hub {

/// JSON form of a query result: REL {island, columns, rows}, KV {island,
/// entries}, ARR {island, name, dims, cells}; every form carries row_count.
nlohmann::json value_to_json(const islands::NativeValue& value);

/// The assembled hub: engines bound to islands, the monitor, policies and the
/// catalog. Engines come back from <data_dir>/<id>.snap when present.
class Hub {
public:
    explicit Hub(HubConfig config);
    Hub(const Hub&) = delete;
    Hub& operator=(const Hub&) = delete;

    const HubConfig& config() const noexcept { return config_; }
    islands::Registry& registry() noexcept { return registry_; }
    query::Monitor& monitor() noexcept { return monitor_; }
    access::PolicyStore& policies() noexcept { return policies_; }
    catalog::Catalog& catalog() noexcept { return catalog_; }
    engines::EngineHandle engine(const std::string& id) const;

    /// Parses and loads all rows or none, then records the dataset in the
    /// catalog. Throws on parse errors (citing the line) or an unknown target.
    IngestReport ingest(const IngestSpec& spec);

    catalog::CrawlReport crawl(const std::filesystem::path& root);

    query::Plan plan(const std::string& text) const;
    std::string explain(const std::string& text) const;
    /// Unknown principals run with no roles, so query control denies them.
    query::ExecutionResult query(const std::string& principal_id, const std::string& text);

    /// Re-reads the policy file.
    void reload_policies();
    void save_catalog() const;
    /// Writes every engine snapshot into data_dir.
    void snapshot() const;
    /// Snapshots when configured and saves the catalog.
    void shutdown();

private:
    HubConfig config_;
    islands::Registry registry_;
    query::Monitor monitor_;
    access::PolicyStore policies_;
    catalog::Catalog catalog_;
};

} // namespace polyhub::hub
