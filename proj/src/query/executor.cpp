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

#include "polyhub/query/executor.hpp"

#include <atomic>
#include <chrono>

#include "polyhub/error.hpp"

namespace polyhub::query {

namespace {

std::atomic<std::uint64_t> temp_serial{0};

/// Detaches a temporary source when the parent step finishes, however it ends.
class TemporaryGuard {
public:
    TemporaryGuard(std::shared_ptr<engines::RelationalEngine> engine, std::string name, engines::Relation rel)
        : engine_(std::move(engine)), name_(std::move(name))
    {
        engine_->attach_temporary(name_, std::move(rel));
    }
    ~TemporaryGuard() { engine_->detach_temporary(name_); }
    TemporaryGuard(const TemporaryGuard&) = delete;
    TemporaryGuard& operator=(const TemporaryGuard&) = delete;

private:
    std::shared_ptr<engines::RelationalEngine> engine_;
    std::string name_;
};

std::int64_t now_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

class Runner {
public:
    Runner(const Plan& plan, const access::Principal& principal, const access::PolicyStore& policies, Monitor& monitor)
        : plan_(plan), principal_(principal), policies_(policies), monitor_(monitor) {}

    islands::NativeValue run(const PlanStep& step)
    {
        std::vector<std::unique_ptr<TemporaryGuard>> temporaries;
        auto call = step.call;
        for (const auto& child : step.children) {
            auto value = run(child.step);
            auto casted = islands::cast(value, child.step.island, child.target);
            auto& select = std::get<islands::RelSelectCall>(call);
            auto name = child.temp_name + "_" + std::to_string(temp_serial.fetch_add(1));
            temporaries.push_back(std::make_unique<TemporaryGuard>(
                select.engine, name, std::get<engines::Relation>(std::move(casted))));
            select.query.table = name;
        }

        auto start = std::chrono::steady_clock::now();
        islands::NativeValue result;
        try {
            result = run_native(step, call);
        } catch (const Error& e) {
            if (e.code() == Errc::access_denied || e.code() == Errc::limit_exceeded) throw;
            throw Error(e.code(), "step " + std::string(islands::to_string(step.island)) + ":" + step.engine.id + ": "
                                      + e.what());
        }
        std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;

        monitor_.append({plan_.signature, step.island, step.engine.id, elapsed.count(),
                         islands::result_rows(result), now_ms()});
        ++appended_;
        return result;
    }

    std::size_t appended() const noexcept { return appended_; }

private:
    islands::NativeValue run_native(const PlanStep& step, const islands::NativeCall& call)
    {
        if (auto* select = std::get_if<islands::RelSelectCall>(&call); select && step.base_object) {
            // Views are applied to the whole base table before the query's own
            // filter and projection, so hidden columns cannot be filtered on.
            auto base = select->engine->select(engines::SelectQuery{*step.base_object, {}, {}, std::nullopt});
            auto visible = access::apply_view(principal_, *step.base_object, base, policies_);
            return engines::select_from(visible, select->query, engines::CompareMode::strict);
        }
        return islands::execute(call, access::principal_auths(principal_));
    }

    const Plan& plan_;
    const access::Principal& principal_;
    const access::PolicyStore& policies_;
    Monitor& monitor_;
    std::size_t appended_ = 0;
};

islands::NativeValue materialize(islands::NativeValue value, std::optional<std::size_t> limit)
{
    return std::visit(
        [&](auto&& v) -> islands::NativeValue {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, engines::Relation>) {
                engines::Relation out{std::move(v.schema), {}};
                out.rows = access::enforce_result_limit(std::move(v.rows), limit);
                return out;
            } else if constexpr (std::is_same_v<T, std::vector<engines::KvEntry>>) {
                return access::enforce_result_limit(std::move(v), limit);
            } else {
                v.cells = access::enforce_result_limit(std::move(v.cells), limit);
                return std::move(v);
            }
        },
        std::move(value));
}

} // namespace

ExecutionResult execute(const Plan& plan, const access::Principal& principal, const access::PolicyStore& policies,
                        Monitor& monitor)
{
    auto decision = access::check_query(principal, plan.ast, policies);
    if (!decision.allowed()) throw access::AccessDenied(decision.reason);

    Runner runner(plan, principal, policies, monitor);
    auto value = runner.run(plan.root);
    auto limited = materialize(std::move(value), decision.max_result_rows);
    return {std::move(limited), std::move(decision), runner.appended()};
}

} // namespace polyhub::query
