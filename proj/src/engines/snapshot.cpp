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

#include "polyhub/engines/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "polyhub/error.hpp"

namespace polyhub::engines::snapshot {

void Writer::u32(std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void Writer::u64(std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void Writer::f64(double v)
{
    u64(std::bit_cast<std::uint64_t>(v));
}

void Writer::str(std::string_view s)
{
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
}

std::string_view Reader::raw(std::size_t n)
{
    if (bytes_.size() - pos_ < n)
        throw Error(Errc::snapshot_error, "snapshot truncated at byte " + std::to_string(pos_));
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t Reader::u8()
{
    return static_cast<std::uint8_t>(raw(1)[0]);
}

std::uint32_t Reader::u32()
{
    auto b = raw(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

std::uint64_t Reader::u64()
{
    auto b = raw(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

double Reader::f64()
{
    return std::bit_cast<double>(u64());
}

std::string Reader::str()
{
    auto n = u32();
    return std::string(raw(n));
}

void Reader::expect_done() const
{
    if (!done())
        throw Error(Errc::snapshot_error, "trailing bytes after offset " + std::to_string(pos_));
}

namespace {

EngineId read_header(Reader& r)
{
    auto m = r.raw(4);
    if (std::memcmp(m.data(), magic, 4) != 0) throw Error(Errc::snapshot_error, "bad snapshot magic");
    auto version = r.u8();
    if (version != format_version)
        throw Error(Errc::snapshot_error, "unsupported snapshot version " + std::to_string(version));
    auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(EngineKind::array))
        throw Error(Errc::snapshot_error, "unknown engine kind " + std::to_string(kind));
    EngineId id{r.str(), static_cast<EngineKind>(kind)};
    if (id.id.empty()) throw Error(Errc::snapshot_error, "empty engine id");
    return id;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::snapshot_error, "cannot open snapshot " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

void write_file(const std::filesystem::path& path, const File& file)
{
    Writer w;
    w.raw(std::string_view(magic, 4));
    w.u8(format_version);
    w.u8(static_cast<std::uint8_t>(file.engine.kind));
    w.str(file.engine.id);
    w.u32(static_cast<std::uint32_t>(file.sections.size()));
    for (const auto& s : file.sections) {
        w.u8(s.tag);
        w.u64(s.payload.size());
        w.raw(s.payload);
    }

    // Write to a sibling temp file then rename so a crash never leaves a
    // half-written snapshot in place.
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write snapshot " + tmp.string());
        out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
        if (!out) throw Error(Errc::io_error, "short write on " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(Errc::io_error, "cannot rename snapshot to " + path.string() + ": " + ec.message());
}

File read_file(const std::filesystem::path& path)
{
    auto bytes = slurp(path);
    Reader r(bytes);
    File file;
    file.engine = read_header(r);
    auto count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        Section s;
        s.tag = r.u8();
        auto len = r.u64();
        s.payload = std::string(r.raw(len));
        file.sections.push_back(std::move(s));
    }
    r.expect_done();
    return file;
}

EngineId peek_engine(const std::filesystem::path& path)
{
    auto bytes = slurp(path);
    Reader r(bytes);
    return read_header(r);
}

} // namespace polyhub::engines::snapshot
