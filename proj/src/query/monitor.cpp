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

#include "polyhub/query/monitor.hpp"

#include "polyhub/error.hpp"

namespace polyhub::query {

Monitor::Monitor(std::size_t window) : window_(window)
{
    if (window_ == 0) throw Error(Errc::invalid_argument, "monitor window must be at least 1");
}

void Monitor::append(QueryRecord record)
{
    if (record.duration_ms < 0) record.duration_ms = 0;
    std::lock_guard lock(mutex_);
    records_.push_back(std::move(record));
}

std::optional<double> Monitor::average_ms(const std::string& engine) const
{
    std::lock_guard lock(mutex_);
    double sum = 0;
    std::size_t n = 0;
    for (auto it = records_.rbegin(); it != records_.rend() && n < window_; ++it) {
        if (it->engine != engine) continue;
        sum += it->duration_ms;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::vector<QueryRecord> Monitor::records() const
{
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t Monitor::size() const
{
    std::lock_guard lock(mutex_);
    return records_.size();
}

} // namespace polyhub::query
