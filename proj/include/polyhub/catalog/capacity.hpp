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
#include <string>

namespace polyhub::catalog {

/// Capacity left for users once redundancy (parity, replicas) is paid for:
/// raw_bytes * (1 - redundancy_overhead), rounded down. Throws
/// Errc::invalid_argument unless 0 <= overhead < 1.
std::uint64_t usable_capacity(std::uint64_t raw_bytes, double redundancy_overhead);

/// "4.00 PB" style rendering in decimal units.
std::string human_bytes(std::uint64_t bytes);

} // namespace polyhub::catalog
