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

#include "polyhub/access/policy.hpp"
#include "polyhub/islands/associative.hpp"
#include "polyhub/query/monitor.hpp"
#include "polyhub/query/planner.hpp"

namespace polyhub::query {

struct ExecutionResult {
    islands::NativeValue value;
    access::Decision decision;
    std::size_t records_appended = 0;
};

/// Runs a plan for one principal.
///
/// Query control is checked first; a denied query throws access::AccessDenied
/// and records nothing. Children run before parents; each child result is
/// cast and attached as a temporary source on the parent's engine for the
/// duration of the parent step. REL base reads pass through the principal's
/// views, KV scans see only cells the principal's auths satisfy. The final
/// result is materialized through the effective result-row limit. One
/// QueryRecord is appended per executed step.
ExecutionResult execute(const Plan& plan, const access::Principal& principal, const access::PolicyStore& policies,
                        Monitor& monitor);

} // namespace polyhub::query
