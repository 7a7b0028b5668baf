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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polyhub/islands/associative.hpp"

namespace polyhub::query {

struct QueryRecord {
    std::string signature;
    islands::IslandTag island = islands::IslandTag::REL;
    std::string engine;
    double duration_ms = 0.0;
    std::size_t result_rows = 0;
    std::int64_t timestamp_ms = 0; // unix epoch

    bool operator==(const QueryRecord&) const = default;
};

inline constexpr std::size_t default_monitor_window = 20;

/// Append-only log of executed plan steps with per-engine moving averages.
class Monitor {
public:
    explicit Monitor(std::size_t window = default_monitor_window);

    std::size_t window() const noexcept { return window_; }
    void append(QueryRecord record);
    /// Mean duration over the engine's last min(window, available) records.
    std::optional<double> average_ms(const std::string& engine) const;
    std::vector<QueryRecord> records() const;
    std::size_t size() const;

private:
    std::size_t window_;
    mutable std::mutex mutex_;
    std::vector<QueryRecord> records_;
};

} // namespace polyhub::query
