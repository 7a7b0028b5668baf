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
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polyhub/engines/relation.hpp"
#include "polyhub/engines/visibility.hpp"
#include "polyhub/error.hpp"
#include "polyhub/query/ast.hpp"

namespace polyhub::access {

using islands::IslandTag;

struct Principal {
    std::string id;
    std::set<std::string> roles;
    engines::AuthSet auths;

    bool operator==(const Principal&) const = default;
};

/// Column and row restriction for one (role, table).
struct ViewPolicy {
    std::string role;
    std::string table;
    std::optional<std::set<std::string>> allowed_columns; // nullopt = ALL
    engines::Predicate row_predicate; // empty = all rows

    bool operator==(const ViewPolicy&) const = default;
};

/// Restrictions on which queries a role may issue.
struct QueryPolicy {
    std::string role;
    std::set<IslandTag> allowed_islands;
    std::optional<std::set<std::string>> table_allowlist; // nullopt = ALL
    std::optional<std::size_t> max_result_rows;           // nullopt = unlimited
    bool require_limit = false;

    bool operator==(const QueryPolicy&) const = default;
};

enum class Verdict { allow, deny };

struct Decision {
    Verdict verdict = Verdict::deny;
    std::string reason;
    /// Effective result-size cap for an allowed query (nullopt = unlimited).
    std::optional<std::size_t> max_result_rows;

    bool allowed() const noexcept { return verdict == Verdict::allow; }
};

class AccessDenied : public Error {
public:
    explicit AccessDenied(const std::string& reason) : Error(Errc::access_denied, reason) {}
};

class LimitExceeded : public Error {
public:
    explicit LimitExceeded(std::size_t limit)
        : Error(Errc::limit_exceeded, "result exceeds limit of " + std::to_string(limit) + " rows (aborted at row "
                                          + std::to_string(limit + 1) + ")"),
          limit_(limit) {}

    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

/// Principals plus both policy kinds. Read-mostly: checks take a shared
/// lock, mutations and reloads take an exclusive one.
class PolicyStore {
public:
    PolicyStore() = default;
    PolicyStore(const PolicyStore& other);
    PolicyStore& operator=(const PolicyStore& other);

    /// Throws Errc::duplicate_id / Errc::invalid_argument on invariant breaks.
    void add_principal(Principal principal);
    void add_view_policy(ViewPolicy policy);
    void add_query_policy(QueryPolicy policy);

    std::optional<Principal> principal(const std::string& id) const;
    std::vector<ViewPolicy> view_policies_for(const Principal& principal, const std::string& table) const;
    std::vector<QueryPolicy> query_policies_for(const Principal& principal) const;
    bool empty() const;

    static PolicyStore from_json(const nlohmann::json& doc);
    static PolicyStore load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    /// Atomically swaps in the policies from `other` (the reload path).
    void replace(const PolicyStore& other);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, Principal> principals_;
    std::map<std::pair<std::string, std::string>, ViewPolicy> views_;
    std::map<std::string, QueryPolicy> queries_;
};

/// Query control. Policies of all the principal's roles are merged with
/// most-permissive union semantics before the query is checked.
Decision check_query(const Principal& principal, const query::QueryAst& ast, const PolicyStore& policies);

/// View-based control over one base-table read. Throws AccessDenied when no
/// role of the principal has a view policy on the table.
engines::Relation apply_view(const Principal& principal, const std::string& table, const engines::Relation& relation,
                             const PolicyStore& policies);

/// Authorization tokens handed to key-value scans.
engines::AuthSet principal_auths(const Principal& principal);

/// Counts rows as they are materialized and aborts on row limit + 1.
class ResultLimiter {
public:
    explicit ResultLimiter(std::optional<std::size_t> limit) : limit_(limit) {}

    /// Throws LimitExceeded once the running count passes the limit.
    void admit(std::size_t rows = 1);
    std::size_t count() const noexcept { return count_; }
    const std::optional<std::size_t>& limit() const noexcept { return limit_; }

private:
    std::optional<std::size_t> limit_;
    std::size_t count_ = 0;
};

/// Moves items from `source` into the result one at a time through the
/// limiter. Either the full result comes back or LimitExceeded is thrown;
/// a truncated result is never returned.
template <typename T>
std::vector<T> enforce_result_limit(std::vector<T> source, std::optional<std::size_t> limit)
{
    ResultLimiter limiter(limit);
    std::vector<T> out;
    out.reserve(source.size());
    for (auto& item : source) {
        limiter.admit();
        out.push_back(std::move(item));
    }
    return out;
}

} // namespace polyhub::access
