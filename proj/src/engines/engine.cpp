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

#include "polyhub/engines/engine.hpp"

#include "polyhub/engines/array.hpp"
#include "polyhub/engines/keyvalue.hpp"
#include "polyhub/engines/relational.hpp"
#include "polyhub/engines/snapshot.hpp"
#include "polyhub/error.hpp"
#include "polyhub/text.hpp"

namespace polyhub::engines {

std::string_view to_string(EngineKind kind) noexcept
{
    switch (kind) {
    case EngineKind::relational: return "relational";
    case EngineKind::keyvalue: return "keyvalue";
    case EngineKind::array: return "array";
    }
    return "relational";
}

EngineKind engine_kind_from_string(std::string_view name)
{
    auto lower = text::to_lower(name);
    if (lower == "relational") return EngineKind::relational;
    if (lower == "keyvalue") return EngineKind::keyvalue;
    if (lower == "array") return EngineKind::array;
    throw Error(Errc::invalid_argument, "unknown engine kind '" + std::string(name) + "'");
}

EngineId engine_id(const EngineHandle& handle)
{
    return std::visit([](const auto& e) { return e->id(); }, handle);
}

std::shared_ptr<RelationalEngine> as_relational(const EngineHandle& handle)
{
    if (auto* e = std::get_if<std::shared_ptr<RelationalEngine>>(&handle)) return *e;
    throw Error(Errc::kind_mismatch, "engine '" + engine_id(handle).id + "' is not relational");
}

std::shared_ptr<KeyValueEngine> as_keyvalue(const EngineHandle& handle)
{
    if (auto* e = std::get_if<std::shared_ptr<KeyValueEngine>>(&handle)) return *e;
    throw Error(Errc::kind_mismatch, "engine '" + engine_id(handle).id + "' is not key-value");
}

std::shared_ptr<ArrayEngine> as_array(const EngineHandle& handle)
{
    if (auto* e = std::get_if<std::shared_ptr<ArrayEngine>>(&handle)) return *e;
    throw Error(Errc::kind_mismatch, "engine '" + engine_id(handle).id + "' is not an array engine");
}

EngineHandle make_engine(const EngineId& id)
{
    if (id.id.empty()) throw Error(Errc::invalid_argument, "engine id must not be empty");
    switch (id.kind) {
    case EngineKind::relational: return std::make_shared<RelationalEngine>(id.id);
    case EngineKind::keyvalue: return std::make_shared<KeyValueEngine>(id.id);
    case EngineKind::array: return std::make_shared<ArrayEngine>(id.id);
    }
    throw Error(Errc::invalid_argument, "unknown engine kind");
}

void checkpoint(const EngineHandle& handle, const std::filesystem::path& path)
{
    std::visit([&](const auto& e) { e->checkpoint(path); }, handle);
}

EngineHandle restore(const std::filesystem::path& path)
{
    switch (snapshot::peek_engine(path).kind) {
    case EngineKind::relational: return RelationalEngine::restore(path);
    case EngineKind::keyvalue: return KeyValueEngine::restore(path);
    case EngineKind::array: return ArrayEngine::restore(path);
    }
    throw Error(Errc::snapshot_error, "unknown engine kind in " + path.string());
}

} // namespace polyhub::engines
