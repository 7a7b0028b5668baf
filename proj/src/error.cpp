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

#include "polyhub/error.hpp"

namespace polyhub {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::schema_violation: return "schema_violation";
    case Errc::type_mismatch: return "type_mismatch";
    case Errc::duplicate_key: return "duplicate_key";
    case Errc::unknown_table: return "unknown_table";
    case Errc::unknown_column: return "unknown_column";
    case Errc::unknown_array: return "unknown_array";
    case Errc::out_of_bounds: return "out_of_bounds";
    case Errc::visibility_syntax: return "visibility_syntax";
    case Errc::kind_mismatch: return "kind_mismatch";
    case Errc::duplicate_binding: return "duplicate_binding";
    case Errc::unsupported: return "unsupported";
    case Errc::parse_error: return "parse_error";
    case Errc::plan_error: return "plan_error";
    case Errc::access_denied: return "access_denied";
    case Errc::limit_exceeded: return "limit_exceeded";
    case Errc::snapshot_error: return "snapshot_error";
    case Errc::io_error: return "io_error";
    case Errc::duplicate_id: return "duplicate_id";
    case Errc::not_found: return "not_found";
    }
    return "unknown";
}

} // namespace polyhub
