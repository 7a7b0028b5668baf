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
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace polyhub::engines {

enum class EngineKind : std::uint8_t { relational = 0, keyvalue = 1, array = 2 };

std::string_view to_string(EngineKind kind) noexcept;
EngineKind engine_kind_from_string(std::string_view name);

struct EngineId {
    std::string id;
    EngineKind kind = EngineKind::relational;

    bool operator==(const EngineId&) const = default;
};

class RelationalEngine;
class KeyValueEngine;
class ArrayEngine;

/// Shared handle to any engine. Engines are internally synchronized, so a
/// handle may be used from several middleware tasks at once.
using EngineHandle = std::variant<std::shared_ptr<RelationalEngine>, std::shared_ptr<KeyValueEngine>,
                                  std::shared_ptr<ArrayEngine>>;

EngineId engine_id(const EngineHandle& handle);

std::shared_ptr<RelationalEngine> as_relational(const EngineHandle& handle);
std::shared_ptr<KeyValueEngine> as_keyvalue(const EngineHandle& handle);
std::shared_ptr<ArrayEngine> as_array(const EngineHandle& handle);

EngineHandle make_engine(const EngineId& id);

void checkpoint(const EngineHandle& handle, const std::filesystem::path& path);
/// Reads the kind byte from the snapshot header and rebuilds the right engine.
EngineHandle restore(const std::filesystem::path& path);

} // namespace polyhub::engines
