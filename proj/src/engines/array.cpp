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

#include "polyhub/engines/array.hpp"

#include <mutex>

#include "polyhub/engines/snapshot.hpp"
#include "polyhub/error.hpp"

namespace polyhub::engines {

namespace {

constexpr std::uint8_t array_section = 1;

std::string coords_text(const std::vector<std::uint64_t>& coords)
{
    std::string out = "[";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(coords[i]);
    }
    return out + "]";
}

} // namespace

DenseArray DenseArray::zeros(std::string name, std::vector<Dimension> dims)
{
    if (dims.empty()) throw Error(Errc::invalid_argument, "array '" + name + "' needs at least one dimension");
    std::uint64_t count = 1;
    for (const auto& d : dims) {
        if (d.name.empty()) throw Error(Errc::invalid_argument, "dimension name must not be empty");
        count *= d.length;
    }
    return DenseArray{std::move(name), std::move(dims), std::vector<double>(count, 0.0)};
}

std::uint64_t DenseArray::cell_count() const noexcept
{
    std::uint64_t count = 1;
    for (const auto& d : dims) count *= d.length;
    return count;
}

std::size_t DenseArray::offset(const std::vector<std::uint64_t>& coords) const
{
    if (coords.size() != dims.size())
        throw Error(Errc::out_of_bounds, "array '" + name + "' has " + std::to_string(dims.size())
                                             + " dims, got coordinate " + coords_text(coords));
    std::size_t off = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (coords[i] >= dims[i].length)
            throw Error(Errc::out_of_bounds, "coordinate " + coords_text(coords) + " out of bounds for '" + name + "'");
        off = off * dims[i].length + coords[i];
    }
    return off;
}

DenseArray subarray(const DenseArray& source, const std::vector<IndexRange>& ranges)
{
    if (ranges.size() != source.dims.size())
        throw Error(Errc::out_of_bounds, "array '" + source.name + "' has " + std::to_string(source.dims.size())
                                             + " dims, got " + std::to_string(ranges.size()) + " ranges");
    DenseArray out{source.name, {}, {}};
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto& r = ranges[i];
        if (r.lo > r.hi || r.hi > source.dims[i].length)
            throw Error(Errc::out_of_bounds, "range " + std::to_string(r.lo) + ":" + std::to_string(r.hi)
                                                 + " out of bounds for dim '" + source.dims[i].name + "'");
        out.dims.push_back({source.dims[i].name, r.hi - r.lo});
    }
    auto total = out.cell_count();
    out.cells.reserve(total);
    // Odometer over the output coordinates.
    std::vector<std::uint64_t> idx(ranges.size(), 0);
    std::vector<std::uint64_t> src(ranges.size());
    for (std::uint64_t n = 0; n < total; ++n) {
        for (std::size_t d = 0; d < idx.size(); ++d) src[d] = ranges[d].lo + idx[d];
        out.cells.push_back(source.at(src));
        for (std::size_t d = idx.size(); d-- > 0;) {
            if (++idx[d] < out.dims[d].length) break;
            idx[d] = 0;
        }
    }
    return out;
}

void ArrayEngine::create(const std::string& name, std::vector<Dimension> dims)
{
    if (name.empty()) throw Error(Errc::invalid_argument, "empty array name");
    auto array = DenseArray::zeros(name, std::move(dims));
    std::unique_lock lock(mutex_);
    if (arrays_.contains(name)) throw Error(Errc::schema_violation, "array '" + name + "' already exists");
    arrays_.emplace(name, std::move(array));
}

void ArrayEngine::write(const std::string& name, const std::vector<CellWrite>& writes)
{
    std::unique_lock lock(mutex_);
    auto it = arrays_.find(name);
    if (it == arrays_.end()) throw Error(Errc::unknown_array, "unknown array '" + name + "'");
    auto& array = it->second;
    std::vector<std::size_t> offsets;
    offsets.reserve(writes.size());
    for (const auto& w : writes) offsets.push_back(array.offset(w.coords));
    for (std::size_t i = 0; i < writes.size(); ++i) array.cells[offsets[i]] = writes[i].value;
}

void ArrayEngine::store(DenseArray array)
{
    if (array.name.empty()) throw Error(Errc::invalid_argument, "empty array name");
    if (array.dims.empty() || array.cells.size() != array.cell_count())
        throw Error(Errc::invalid_argument, "array '" + array.name + "' cell count does not match dims");
    std::unique_lock lock(mutex_);
    auto key = array.name;
    arrays_.insert_or_assign(std::move(key), std::move(array));
}

const DenseArray& ArrayEngine::find(const std::string& name) const
{
    auto it = arrays_.find(name);
    if (it == arrays_.end()) throw Error(Errc::unknown_array, "unknown array '" + name + "'");
    return it->second;
}

double ArrayEngine::read(const std::string& name, const std::vector<std::uint64_t>& coords) const
{
    std::shared_lock lock(mutex_);
    return find(name).at(coords);
}

DenseArray ArrayEngine::get(const std::string& name) const
{
    std::shared_lock lock(mutex_);
    return find(name);
}

DenseArray ArrayEngine::subarray(const std::string& name, const std::vector<IndexRange>& ranges) const
{
    std::shared_lock lock(mutex_);
    return engines::subarray(find(name), ranges);
}

bool ArrayEngine::has_array(const std::string& name) const
{
    std::shared_lock lock(mutex_);
    return arrays_.contains(name);
}

std::vector<std::string> ArrayEngine::array_names() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> names;
    for (const auto& [name, _] : arrays_) names.push_back(name);
    return names;
}

std::map<std::string, DenseArray> ArrayEngine::dump() const
{
    std::shared_lock lock(mutex_);
    return arrays_;
}

void ArrayEngine::checkpoint(const std::filesystem::path& path) const
{
    snapshot::File file{id(), {}};
    {
        std::shared_lock lock(mutex_);
        for (const auto& [name, array] : arrays_) {
            snapshot::Writer w;
            w.str(name);
            w.u32(static_cast<std::uint32_t>(array.dims.size()));
            for (const auto& d : array.dims) {
                w.str(d.name);
                w.u64(d.length);
            }
            w.u64(array.cells.size());
            for (double v : array.cells) w.f64(v);
            file.sections.push_back({array_section, w.bytes()});
        }
    }
    snapshot::write_file(path, file);
}

std::shared_ptr<ArrayEngine> ArrayEngine::restore(const std::filesystem::path& path)
{
    auto file = snapshot::read_file(path);
    if (file.engine.kind != EngineKind::array)
        throw Error(Errc::snapshot_error, path.string() + " is not an array snapshot");
    auto engine = std::make_shared<ArrayEngine>(file.engine.id);
    for (const auto& section : file.sections) {
        if (section.tag != array_section) throw Error(Errc::snapshot_error, "unknown array section");
        snapshot::Reader r(section.payload);
        DenseArray array;
        array.name = r.str();
        auto ndims = r.u32();
        for (std::uint32_t i = 0; i < ndims; ++i) {
            auto dname = r.str();
            array.dims.push_back({std::move(dname), r.u64()});
        }
        auto ncells = r.u64();
        if (ndims == 0 || ncells != array.cell_count())
            throw Error(Errc::snapshot_error, "array '" + array.name + "' cell count does not match dims");
        for (std::uint64_t i = 0; i < ncells; ++i) array.cells.push_back(r.f64());
        r.expect_done();
        auto key = array.name;
        engine->arrays_.emplace(std::move(key), std::move(array));
    }
    return engine;
}

} // namespace polyhub::engines
