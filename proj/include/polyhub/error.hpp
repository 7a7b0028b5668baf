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

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyhub {

enum class Errc {
    invalid_argument,
    schema_violation,
    type_mismatch,
    duplicate_key,
    unknown_table,
    unknown_column,
    unknown_array,
    out_of_bounds,
    visibility_syntax,
    kind_mismatch,
    duplicate_binding,
    unsupported,
    parse_error,
    plan_error,
    access_denied,
    limit_exceeded,
    snapshot_error,
    io_error,
    duplicate_id,
    not_found,
};

std::string_view errc_name(Errc code) noexcept;

/// Base exception for every failure raised by the hub. The code is stable and
/// is what the service maps to HTTP status classes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace polyhub
