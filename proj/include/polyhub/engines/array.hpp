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
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "polyhub/engines/engine.hpp"

namespace polyhub::engines {

struct Dimension {
    std::string name;
    std::uint64_t length = 0;

    bool operator==(const Dimension&) const = default;
};

/// Named n-dimensional float64 array, cells in row-major order.
struct DenseArray {
    std::string name;
    std::vector<Dimension> dims;
    std::vector<double> cells;

    /// Throws Errc::invalid_argument when dims are empty or unnamed.
    static DenseArray zeros(std::string name, std::vector<Dimension> dims);

    std::uint64_t cell_count() const noexcept;
    /// Row-major offset; throws Errc::out_of_bounds.
    std::size_t offset(const std::vector<std::uint64_t>& coords) const;
    double at(const std::vector<std::uint64_t>& coords) const { return cells[offset(coords)]; }

    bool operator==(const DenseArray&) const = default;
};

struct IndexRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    bool operator==(const IndexRange&) const = default;
};

struct CellWrite {
    std::vector<std::uint64_t> coords;
    double value = 0.0;
};

/// Rectangular sub-block; result keeps the source name and dimension names.
DenseArray subarray(const DenseArray& source, const std::vector<IndexRange>& ranges);

class ArrayEngine {
public:
    explicit ArrayEngine(std::string id) : id_(std::move(id)) {}

    EngineId id() const { return {id_, EngineKind::array}; }

    void create(const std::string& name, std::vector<Dimension> dims);
    /// All coordinates are bounds-checked before any cell is written.
    void write(const std::string& name, const std::vector<CellWrite>& writes);
    /// Replaces the whole array (used by loads and casts into this engine).
    void store(DenseArray array);
    double read(const std::string& name, const std::vector<std::uint64_t>& coords) const;
    DenseArray get(const std::string& name) const;
    DenseArray subarray(const std::string& name, const std::vector<IndexRange>& ranges) const;

    bool has_array(const std::string& name) const;
    std::vector<std::string> array_names() const;
    std::map<std::string, DenseArray> dump() const;

    void checkpoint(const std::filesystem::path& path) const;
    static std::shared_ptr<ArrayEngine> restore(const std::filesystem::path& path);

private:
    const DenseArray& find(const std::string& name) const;

    std::string id_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, DenseArray> arrays_;
};

} // namespace polyhub::engines
