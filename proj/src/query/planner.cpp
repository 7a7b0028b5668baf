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

#include "polyhub/query/planner.hpp"

#include <algorithm>

#include "polyhub/error.hpp"
#include "polyhub/query/parser.hpp"

namespace polyhub::query {

std::vector<std::string> EngineProbe::engines_holding(IslandTag island, const std::string& object) const
{
    std::vector<std::string> out;
    for (const auto& id : registry_.engines_of(island)) {
        auto handle = registry_.engine(id.id);
        if (!handle) continue;
        bool holds = std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(*e)>;
                if constexpr (std::is_same_v<T, engines::ArrayEngine>)
                    return e->has_array(object);
                else
                    return e->has_table(object);
            },
            *handle);
        if (holds) out.push_back(id.id);
    }
    return out;
}

std::string choose_engine(const std::vector<std::string>& candidates, const Monitor& monitor)
{
    if (candidates.empty()) throw Error(Errc::plan_error, "no candidate engines");
    std::optional<std::size_t> best;
    double best_avg = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto avg = monitor.average_ms(candidates[i]);
        if (!avg) continue;
        if (!best || *avg < best_avg) {
            best = i;
            best_avg = *avg;
        }
    }
    return candidates[best.value_or(0)];
}

namespace {

class Planner {
public:
    Planner(const islands::Registry& registry, const ObjectLocator& locator, const Monitor& monitor)
        : registry_(registry), locator_(locator), monitor_(monitor) {}

    PlanStep plan_scoped(const ScopedExpr& expr)
    {
        auto bound = registry_.engines_of(expr.tag);
        if (bound.empty())
            throw Error(Errc::plan_error, "island " + std::string(islands::to_string(expr.tag)) + " has no engines");

        PlanStep step;
        step.island = expr.tag;
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, SelectNode>) {
                    engines::SelectQuery q{"", node.columns, node.where, node.limit};
                    auto mode = engines::CompareMode::strict;
                    if (auto* table = std::get_if<std::string>(&node.source)) {
                        q.table = *table;
                        step.base_object = *table;
                        step.engine = pick(expr.tag, *table, bound);
                    } else {
                        const auto& cast = std::get<CastExpr>(node.source);
                        if (cast.target != IslandTag::REL)
                            throw Error(Errc::plan_error, "CAST in a REL source must target REL, not "
                                                              + std::string(islands::to_string(cast.target)));
                        PlanChild child{plan_scoped(*cast.inner), cast.target, "__cast_" + std::to_string(temp_counter_++)};
                        q.table = child.temp_name;
                        mode = engines::CompareMode::lenient;
                        // The temporary can live on any engine of the island.
                        std::vector<std::string> ids;
                        for (const auto& e : bound) ids.push_back(e.id);
                        step.engine = resolve(choose_engine(ids, monitor_));
                        step.children.push_back(std::move(child));
                    }
                    step.op = islands::RelSelect{std::move(q), mode};
                } else if constexpr (std::is_same_v<T, ScanNode>) {
                    step.base_object = node.table;
                    step.engine = pick(expr.tag, node.table, bound);
                    step.op = islands::KvScan{node.table, node.rows, node.columns};
                } else {
                    step.base_object = node.array;
                    step.engine = pick(expr.tag, node.array, bound);
                    step.op = islands::ArrSub{node.array, node.ranges};
                }
            },
            expr.query);
        step.call = registry_.shim(expr.tag, step.engine.id).translate(step.op);
        return step;
    }

private:
    engines::EngineId pick(IslandTag tag, const std::string& object, const std::vector<engines::EngineId>& bound)
    {
        auto holders = locator_.engines_holding(tag, object);
        std::vector<std::string> candidates;
        for (const auto& e : bound) {
            if (std::find(holders.begin(), holders.end(), e.id) != holders.end()) candidates.push_back(e.id);
        }
        if (candidates.empty())
            throw Error(Errc::plan_error, "object '" + object + "' not found on any "
                                              + std::string(islands::to_string(tag)) + " engine");
        return resolve(choose_engine(candidates, monitor_));
    }

    engines::EngineId resolve(const std::string& id) const
    {
        auto handle = registry_.engine(id);
        if (!handle) throw Error(Errc::plan_error, "engine '" + id + "' is not registered");
        return engines::engine_id(*handle);
    }

    const islands::Registry& registry_;
    const ObjectLocator& locator_;
    const Monitor& monitor_;
    std::size_t temp_counter_ = 0;
};

void explain_into(const PlanStep& step, int depth, std::string& out)
{
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += std::string(islands::to_string(step.island)) + ":" + step.engine.id + " " + islands::summary(step.call) + "\n";
    for (const auto& child : step.children) explain_into(child.step, depth + 1, out);
}

} // namespace

Plan plan(const QueryAst& ast, const islands::Registry& registry, const ObjectLocator& locator, const Monitor& monitor)
{
    Planner planner(registry, locator, monitor);
    auto root = planner.plan_scoped(ast);
    return Plan{ast, signature(render(ast)), std::move(root)};
}

std::string explain(const Plan& plan)
{
    std::string out;
    explain_into(plan.root, 0, out);
    return out;
}

} // namespace polyhub::query
