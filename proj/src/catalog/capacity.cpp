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

#include "polyhub/catalog/capacity.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "polyhub/error.hpp"

namespace polyhub::catalog {

std::uint64_t usable_capacity(std::uint64_t raw_bytes, double redundancy_overhead)
{
    if (!(redundancy_overhead >= 0.0 && redundancy_overhead < 1.0))
        throw Error(Errc::invalid_argument, "redundancy overhead must be in [0, 1)");
    auto usable = static_cast<long double>(raw_bytes) * (1.0L - static_cast<long double>(redundancy_overhead));
    return static_cast<std::uint64_t>(std::floor(usable));
}

std::string human_bytes(std::uint64_t bytes)
{
    static constexpr std::array units{"B", "KB", "MB", "GB", "TB", "PB", "EB"};
    auto value = static_cast<double>(bytes);
    std::size_t unit = 0;
    while (value >= 1000.0 && unit + 1 < units.size()) {
        value /= 1000.0;
        ++unit;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, unit == 0 ? "%.0f %s" : "%.2f %s", value, units[unit]);
    return buf;
}

} // namespace polyhub::catalog
