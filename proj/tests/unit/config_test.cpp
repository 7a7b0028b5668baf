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

#include "polyhub/error.hpp"
#include "polyhub/hub/config.hpp"

using namespace polyhub;
using namespace polyhub::hub;

TEST(Config, Defaults)
{
    auto c = parse_config("");
    EXPECT_TRUE(c.snapshot_on_shutdown);
    EXPECT_EQ(c.monitor_window, 20u);
    EXPECT_EQ(c.engines.size(), 3u);
    EXPECT_EQ(c.resolved_catalog_file(), c.data_dir / "catalog.json");
}

TEST(Config, ParsesKeyValueLines)
{
    auto c = parse_config(R"(# comment
data_dir = /tmp/hub
snapshot_on_shutdown = false
monitor_window=5
port = 9090
host = 0.0.0.0
policy_file = /etc/p.json
catalog_file = /etc/c.json
engines = rel1:relational, rel2:relational, kv1:keyvalue
)");
    EXPECT_EQ(c.data_dir, "/tmp/hub");
    EXPECT_FALSE(c.snapshot_on_shutdown);
    EXPECT_EQ(c.monitor_window, 5u);
    EXPECT_EQ(c.port, 9090);
    EXPECT_EQ(c.host, "0.0.0.0");
    EXPECT_EQ(c.policy_file, "/etc/p.json");
    EXPECT_EQ(c.resolved_catalog_file(), "/etc/c.json");
    ASSERT_EQ(c.engines.size(), 3u);
    EXPECT_EQ(c.engines[1], (engines::EngineId{"rel2", engines::EngineKind::relational}));
}

TEST(Config, RejectsInvalidValues)
{
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("monitor_window = 0").find("line 1"), std::string::npos);
    EXPECT_NE(message("\nport = 70000").find("line 2"), std::string::npos);
    EXPECT_FALSE(message("port = 0").empty());
    EXPECT_FALSE(message("port = abc").empty());
    EXPECT_NE(message("colour = blue").find("unknown key"), std::string::npos);
    EXPECT_FALSE(message("just text").empty());
    EXPECT_FALSE(message("snapshot_on_shutdown = maybe").empty());
    EXPECT_FALSE(message("engines = a:relational,a:keyvalue").empty());
    EXPECT_FALSE(message("engines = a:graph").empty());
    EXPECT_FALSE(message("engines = nokind").empty());
}
