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

#include <string>

#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/hub/hub.hpp"
#include "support.hpp"

namespace polyhub::test_support {

inline constexpr const char* cross_island_query = "REL(SELECT _row FROM CAST(KV(SCAN w), REL) WHERE count > 5)";

/// alice: analyst (REL and KV, unlimited). carol: capped at one result row.
/// bob: known principal without roles.
inline constexpr const char* fixture_policies = R"({
  "principals": [
    {"id": "alice", "roles": ["analyst"], "auths": []},
    {"id": "carol", "roles": ["capped"], "auths": []},
    {"id": "bob", "roles": [], "auths": []}
  ],
  "view_policies": [],
  "query_policies": [
    {"role": "analyst", "allowed_islands": ["REL", "KV"], "table_allowlist": "ALL", "max_result_rows": null, "require_limit": false},
    {"role": "capped", "allowed_islands": ["REL", "KV"], "table_allowlist": "ALL", "max_result_rows": 1, "require_limit": false}
  ]
})";

inline hub::HubConfig fixture_config(const TempDir& dir)
{
    write_text(dir / "data" / "policies.json", fixture_policies);
    hub::HubConfig config;
    config.data_dir = dir / "data";
    return config;
}

/// Word counts in kv1 table w: apple 9, bee 2, cat 5, date 6.
inline void seed_wordcounts(hub::Hub& h)
{
    engines::as_keyvalue(h.engine("kv1"))
        ->put("w", {{"apple", "count", "", "9"}, {"bee", "count", "", "2"}, {"cat", "count", "", "5"},
                    {"date", "count", "", "6"}});
}

} // namespace polyhub::test_support
