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

#include <optional>
#include <string>
#include <vector>

#include "polyhub/islands/registry.hpp"
#include "polyhub/query/ast.hpp"
#include "polyhub/query/monitor.hpp"

namespace polyhub::query {

/// Answers "which engines hold this object". The catalog is the production
/// implementation; EngineProbe asks the engines directly.
class ObjectLocator {
public:
    virtual ~ObjectLocator() = default;
    virtual std::vector<std::string> engines_holding(IslandTag island, const std::string& object) const = 0;
};

/// Locator that inspects the registered engines' tables and arrays.
class EngineProbe final : public ObjectLocator {
public:
    explicit EngineProbe(const islands::Registry& registry) : registry_(registry) {}
    std::vector<std::string> engines_holding(IslandTag island, const std::string& object) const override;

private:
    const islands::Registry& registry_;
};

struct PlanChild;

struct PlanStep {
    IslandTag island = IslandTag::REL;
    engines::EngineId engine;
    islands::IslandOp op;
    islands::NativeCall call;
    /// Base table / array read by this step; views apply to REL base reads.
    std::optional<std::string> base_object;
    std::vector<PlanChild> children;
};

/// A child step whose output is cast to `target` and materialized as the
/// parent's temporary source `temp_name`.
struct PlanChild {
    PlanStep step;
    IslandTag target = IslandTag::REL;
    std::string temp_name;
};

struct Plan {
    QueryAst ast;
    std::string signature;
    PlanStep root;
};

/// Picks, per scoped subquery, the bound engine holding the object with the
/// lowest monitor average. Engines without history are only chosen when no
/// candidate has history; ties and the no-history case go to the earliest
/// registered engine. Cast sources become child steps.
Plan plan(const QueryAst& ast, const islands::Registry& registry, const ObjectLocator& locator,
          const Monitor& monitor);

/// Chooses among candidates given in registration order.
std::string choose_engine(const std::vector<std::string>& candidates, const Monitor& monitor);

/// Indented tree, one line per step: "<island>:<engine> <native call summary>".
std::string explain(const Plan& plan);

} // namespace polyhub::query
