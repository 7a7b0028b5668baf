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
#include <string>
#include <string_view>
#include <vector>

#include "polyhub/engines/engine.hpp"

namespace polyhub::engines::snapshot {

// File layout (all integers little-endian):
//
//   "PHUB"            4 bytes magic
//   version           u8  (currently 1)
//   engine kind       u8  (0 relational, 1 keyvalue, 2 array)
//   engine id         str
//   section count     u32
//   sections          { tag u8, payload length u64, payload bytes }*
//
// str = u32 length + bytes. Section payloads are engine specific and use the
// same primitive encoders.

inline constexpr char magic[4] = {'P', 'H', 'U', 'B'};
inline constexpr std::uint8_t format_version = 1;

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v);
    void str(std::string_view s);
    void raw(std::string_view bytes) { buf_.append(bytes); }

    const std::string& bytes() const noexcept { return buf_; }

private:
    std::string buf_;
};

/// Bounds-checked reader; any overrun throws Errc::snapshot_error.
class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64();
    std::string str();
    std::string_view raw(std::size_t n);

    bool done() const noexcept { return pos_ == bytes_.size(); }
    void expect_done() const;

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

struct Section {
    std::uint8_t tag = 0;
    std::string payload;
};

struct File {
    EngineId engine;
    std::vector<Section> sections;
};

void write_file(const std::filesystem::path& path, const File& file);
File read_file(const std::filesystem::path& path);
/// Reads only the header; used to dispatch restore by engine kind.
EngineId peek_engine(const std::filesystem::path& path);

} // namespace polyhub::engines::snapshot
