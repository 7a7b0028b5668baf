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

#include "polyhub/access/policy.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "polyhub/text.hpp"

namespace polyhub::access {

using nlohmann::json;

PolicyStore::PolicyStore(const PolicyStore& other)
{
    std::shared_lock lock(other.mutex_);
    principals_ = other.principals_;
    views_ = other.views_;
    queries_ = other.queries_;
}

PolicyStore& PolicyStore::operator=(const PolicyStore& other)
{
    if (this != &other) replace(other);
    return *this;
}

void PolicyStore::add_principal(Principal principal)
{
    if (principal.id.empty()) throw Error(Errc::invalid_argument, "principal id must not be empty");
    for (const auto& token : principal.auths) {
        if (!engines::is_visibility_token(token))
            throw Error(Errc::invalid_argument, "auth token '" + token + "' is not a valid visibility token");
    }
    std::unique_lock lock(mutex_);
    auto id = principal.id;
    if (!principals_.try_emplace(id, std::move(principal)).second)
        throw Error(Errc::duplicate_id, "duplicate principal '" + id + "'");
}

void PolicyStore::add_view_policy(ViewPolicy policy)
{
    if (policy.role.empty() || policy.table.empty())
        throw Error(Errc::invalid_argument, "view policy needs a role and a table");
    std::unique_lock lock(mutex_);
    auto key = std::make_pair(policy.role, policy.table);
    if (!views_.try_emplace(key, std::move(policy)).second)
        throw Error(Errc::duplicate_id, "duplicate view policy for role '" + key.first + "' on '" + key.second + "'");
}

void PolicyStore::add_query_policy(QueryPolicy policy)
{
    if (policy.role.empty()) throw Error(Errc::invalid_argument, "query policy needs a role");
    if (policy.max_result_rows && *policy.max_result_rows == 0)
        throw Error(Errc::invalid_argument, "max_result_rows must be positive");
    std::unique_lock lock(mutex_);
    auto role = policy.role;
    if (!queries_.try_emplace(role, std::move(policy)).second)
        throw Error(Errc::duplicate_id, "duplicate query policy for role '" + role + "'");
}

std::optional<Principal> PolicyStore::principal(const std::string& id) const
{
    std::shared_lock lock(mutex_);
    auto it = principals_.find(id);
    if (it == principals_.end()) return std::nullopt;
    return it->second;
}

std::vector<ViewPolicy> PolicyStore::view_policies_for(const Principal& principal, const std::string& table) const
{
    std::shared_lock lock(mutex_);
    std::vector<ViewPolicy> out;
    for (const auto& role : principal.roles) {
        auto it = views_.find({role, table});
        if (it != views_.end()) out.push_back(it->second);
    }
    return out;
}

std::vector<QueryPolicy> PolicyStore::query_policies_for(const Principal& principal) const
{
    std::shared_lock lock(mutex_);
    std::vector<QueryPolicy> out;
    for (const auto& role : principal.roles) {
        auto it = queries_.find(role);
        if (it != queries_.end()) out.push_back(it->second);
    }
    return out;
}

bool PolicyStore::empty() const
{
    std::shared_lock lock(mutex_);
    return views_.empty() && queries_.empty();
}

void PolicyStore::replace(const PolicyStore& other)
{
    PolicyStore copy(other);
    std::unique_lock lock(mutex_);
    principals_ = std::move(copy.principals_);
    views_ = std::move(copy.views_);
    queries_ = std::move(copy.queries_);
}

namespace {

engines::Scalar scalar_from_json(const json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) return v.get<double>();
    throw Error(Errc::invalid_argument, "predicate value must be a string or number");
}

json scalar_to_json(const engines::Scalar& s)
{
    return std::visit([](const auto& v) { return json(v); }, s);
}

engines::Predicate predicate_from_json(const json& arr)
{
    engines::Predicate out;
    for (const auto& c : arr) {
        auto op = engines::compare_op_from_string(c.at("op").get<std::string>());
        if (!op) throw Error(Errc::invalid_argument, "bad comparison operator " + c.at("op").dump());
        out.push_back({c.at("column").get<std::string>(), *op, scalar_from_json(c.at("value"))});
    }
    return out;
}

json predicate_to_json(const engines::Predicate& p)
{
    json arr = json::array();
    for (const auto& c : p)
        arr.push_back({{"column", c.column}, {"op", engines::to_string(c.op)}, {"value", scalar_to_json(c.literal)}});
    return arr;
}

std::optional<std::set<std::string>> set_or_all(const json& doc, const char* key)
{
    if (!doc.contains(key)) return std::nullopt;
    const auto& v = doc.at(key);
    if (v.is_string() && text::to_upper(v.get<std::string>()) == "ALL") return std::nullopt;
    return v.get<std::set<std::string>>();
}

json set_or_all_json(const std::optional<std::set<std::string>>& s)
{
    return s ? json(*s) : json("ALL");
}

} // namespace

PolicyStore PolicyStore::from_json(const json& doc)
{
    PolicyStore store;
    try {
        for (const auto& p : doc.value("principals", json::array())) {
            Principal principal;
            principal.id = p.at("id").get<std::string>();
            principal.roles = p.value("roles", std::set<std::string>{});
            for (const auto& a : p.value("auths", std::vector<std::string>{})) principal.auths.insert(a);
            store.add_principal(std::move(principal));
        }
        for (const auto& v : doc.value("view_policies", json::array())) {
            ViewPolicy policy;
            policy.role = v.at("role").get<std::string>();
            policy.table = v.at("table").get<std::string>();
            policy.allowed_columns = set_or_all(v, "allowed_columns");
            if (v.contains("row_predicate") && !v.at("row_predicate").is_null())
                policy.row_predicate = predicate_from_json(v.at("row_predicate"));
            store.add_view_policy(std::move(policy));
        }
        for (const auto& q : doc.value("query_policies", json::array())) {
            QueryPolicy policy;
            policy.role = q.at("role").get<std::string>();
            for (const auto& tag : q.at("allowed_islands")) policy.allowed_islands.insert(islands::island_tag_from_string(tag.get<std::string>()));
            policy.table_allowlist = set_or_all(q, "table_allowlist");
            if (q.contains("max_result_rows") && !q.at("max_result_rows").is_null())
                policy.max_result_rows = q.at("max_result_rows").get<std::size_t>();
            policy.require_limit = q.value("require_limit", false);
            store.add_query_policy(std::move(policy));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed policy document: ") + e.what());
    }
    return store;
}

PolicyStore PolicyStore::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read policy file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, "policy file " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

json PolicyStore::to_json() const
{
    std::shared_lock lock(mutex_);
    json doc{{"principals", json::array()}, {"view_policies", json::array()}, {"query_policies", json::array()}};
    for (const auto& [_, p] : principals_)
        doc["principals"].push_back({{"id", p.id}, {"roles", p.roles}, {"auths", std::vector<std::string>(p.auths.begin(), p.auths.end())}});
    for (const auto& [_, v] : views_)
        doc["view_policies"].push_back({{"role", v.role},
                                        {"table", v.table},
                                        {"allowed_columns", set_or_all_json(v.allowed_columns)},
                                        {"row_predicate", predicate_to_json(v.row_predicate)}});
    for (const auto& [_, q] : queries_) {
        json islands_json = json::array();
        for (auto tag : q.allowed_islands) islands_json.push_back(islands::to_string(tag));
        doc["query_policies"].push_back({{"role", q.role},
                                         {"allowed_islands", islands_json},
                                         {"table_allowlist", set_or_all_json(q.table_allowlist)},
                                         {"max_result_rows", q.max_result_rows ? json(*q.max_result_rows) : json()},
                                         {"require_limit", q.require_limit}});
    }
    return doc;
}

Decision check_query(const Principal& principal, const query::QueryAst& ast, const PolicyStore& policies)
{
    auto roles = policies.query_policies_for(principal);
    if (roles.empty()) return {Verdict::deny, "no policy: principal '" + principal.id + "' has no query policy", {}};

    // Most-permissive union across the principal's roles.
    std::set<IslandTag> islands;
    std::optional<std::set<std::string>> tables = std::set<std::string>{};
    std::optional<std::size_t> max_rows = 0;
    bool require_limit = true;
    for (const auto& p : roles) {
        islands.insert(p.allowed_islands.begin(), p.allowed_islands.end());
        if (!p.table_allowlist)
            tables.reset();
        else if (tables)
            tables->insert(p.table_allowlist->begin(), p.table_allowlist->end());
        if (!p.max_result_rows)
            max_rows.reset();
        else if (max_rows)
            max_rows = std::max(*max_rows, *p.max_result_rows);
        require_limit = require_limit && p.require_limit;
    }

    for (auto tag : query::scoped_islands(ast)) {
        if (!islands.contains(tag))
            return {Verdict::deny, "island " + std::string(islands::to_string(tag)) + " is not permitted for principal '"
                                       + principal.id + "'", {}};
    }
    if (tables) {
        for (const auto& ref : query::referenced_objects(ast)) {
            if (!tables->contains(ref.name))
                return {Verdict::deny, "table '" + ref.name + "' is not permitted for principal '" + principal.id + "'", {}};
        }
    }
    if (require_limit && ast.tag == IslandTag::REL) {
        const auto& limit = std::get<query::SelectNode>(ast.query).limit;
        if (!limit)
            return {Verdict::deny, "query must carry a LIMIT"
                                       + (max_rows ? " of at most " + std::to_string(*max_rows) : std::string()), {}};
        if (max_rows && *limit > *max_rows)
            return {Verdict::deny, "LIMIT " + std::to_string(*limit) + " exceeds maximum of " + std::to_string(*max_rows), {}};
    }
    return {Verdict::allow, "allowed", max_rows};
}

engines::Relation apply_view(const Principal& principal, const std::string& table, const engines::Relation& relation,
                             const PolicyStore& policies)
{
    auto grants = policies.view_policies_for(principal, table);
    if (grants.empty())
        throw AccessDenied("access denied: principal '" + principal.id + "' has no view on table '" + table + "'");

    std::optional<std::set<std::string>> columns = std::set<std::string>{};
    bool all_rows = false;
    std::vector<engines::BoundPredicate> predicates;
    for (const auto& g : grants) {
        if (!g.allowed_columns)
            columns.reset();
        else if (columns)
            columns->insert(g.allowed_columns->begin(), g.allowed_columns->end());
        if (g.row_predicate.empty())
            all_rows = true;
        else
            predicates.emplace_back(relation.schema, g.row_predicate, engines::CompareMode::strict);
    }

    std::vector<std::size_t> keep;
    std::vector<engines::Column> kept_columns;
    for (std::size_t i = 0; i < relation.schema.size(); ++i) {
        const auto& col = relation.schema.columns()[i];
        if (!columns || columns->contains(col.name)) {
            keep.push_back(i);
            kept_columns.push_back(col);
        }
    }
    std::optional<std::string> key;
    if (const auto& k = relation.schema.key_column(); k && (!columns || columns->contains(*k))) key = k;

    engines::Relation out{engines::Schema(std::move(kept_columns), key), {}};
    for (const auto& row : relation.rows) {
        bool visible = all_rows || std::any_of(predicates.begin(), predicates.end(),
                                               [&](const auto& p) { return p.matches(row); });
        if (!visible) continue;
        engines::Row projected;
        projected.reserve(keep.size());
        for (auto i : keep) projected.push_back(row[i]);
        out.rows.push_back(std::move(projected));
    }
    return out;
}

engines::AuthSet principal_auths(const Principal& principal)
{
    return principal.auths;
}

void ResultLimiter::admit(std::size_t rows)
{
    count_ += rows;
    if (limit_ && count_ > *limit_) throw LimitExceeded(*limit_);
}

} // namespace polyhub::access
