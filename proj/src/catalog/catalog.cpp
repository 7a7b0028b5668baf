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

#include "polyhub/catalog/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>

#include "polyhub/error.hpp"
#include "polyhub/formats.hpp"
#include "polyhub/text.hpp"

namespace polyhub::catalog {

namespace fs = std::filesystem;
using nlohmann::json;

Timestamp now()
{
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

Catalog::Catalog(const Catalog& other)
{
    std::shared_lock lock(other.mutex_);
    entries_ = other.entries_;
    agreements_ = other.agreements_;
}

Catalog& Catalog::operator=(const Catalog& other)
{
    if (this == &other) return *this;
    Catalog copy(other);
    std::unique_lock lock(mutex_);
    entries_ = std::move(copy.entries_);
    agreements_ = std::move(copy.agreements_);
    return *this;
}

void Catalog::validate(const DatasetEntry& entry)
{
    if (entry.id.empty()) throw Error(Errc::invalid_argument, "dataset id must not be empty");
    if (entry.locations.empty() && entry.source_path.empty())
        throw Error(Errc::invalid_argument, "dataset '" + entry.id + "' needs a location or a source path");
    if (entry.updated_at < entry.created_at)
        throw Error(Errc::invalid_argument, "dataset '" + entry.id + "' updated_at precedes created_at");
}

std::string Catalog::register_entry(DatasetEntry entry)
{
    if (entry.created_at == 0 && entry.updated_at == 0) entry.created_at = entry.updated_at = now();
    validate(entry);
    std::unique_lock lock(mutex_);
    auto id = entry.id;
    if (!entries_.try_emplace(id, std::move(entry)).second)
        throw Error(Errc::duplicate_id, "dataset '" + id + "' is already registered");
    return id;
}

void Catalog::upsert(DatasetEntry entry)
{
    if (entry.created_at == 0 && entry.updated_at == 0) entry.created_at = entry.updated_at = now();
    std::unique_lock lock(mutex_);
    if (auto it = entries_.find(entry.id); it != entries_.end()) {
        entry.created_at = std::min(entry.created_at, it->second.created_at);
        entry.updated_at = std::max(entry.updated_at, entry.created_at);
    }
    validate(entry);
    auto id = entry.id;
    entries_.insert_or_assign(std::move(id), std::move(entry));
}

std::optional<DatasetEntry> Catalog::get(const std::string& id) const
{
    std::shared_lock lock(mutex_);
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<DatasetEntry> Catalog::entries() const
{
    std::shared_lock lock(mutex_);
    std::vector<DatasetEntry> out;
    for (const auto& [_, e] : entries_) out.push_back(e);
    return out;
}

std::size_t Catalog::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

bool Catalog::remove(const std::string& id)
{
    std::unique_lock lock(mutex_);
    return entries_.erase(id) > 0;
}

std::vector<DatasetEntry> Catalog::search(const std::vector<std::string>& keywords) const
{
    std::vector<std::string> wanted;
    for (const auto& k : keywords) wanted.push_back(text::to_lower(k));

    std::vector<std::pair<std::size_t, DatasetEntry>> scored;
    {
        std::shared_lock lock(mutex_);
        for (const auto& [_, e] : entries_) {
            std::set<std::string> terms;
            for (const auto& t : e.metatags) terms.insert(text::to_lower(t));
            terms.insert(text::to_lower(e.name));
            auto hits = static_cast<std::size_t>(
                std::count_if(wanted.begin(), wanted.end(), [&](const auto& k) { return terms.contains(k); }));
            if (!wanted.empty() && hits == 0) continue;
            scored.emplace_back(hits, e);
        }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        if (a.second.updated_at != b.second.updated_at) return a.second.updated_at > b.second.updated_at;
        return a.second.id < b.second.id;
    });
    std::vector<DatasetEntry> out;
    for (auto& [_, e] : scored) out.push_back(std::move(e));
    return out;
}

std::vector<std::vector<std::string>> Catalog::detect_duplicates() const
{
    std::map<std::string, std::vector<std::string>> by_checksum;
    {
        std::shared_lock lock(mutex_);
        for (const auto& [id, e] : entries_) {
            if (!e.checksum.empty()) by_checksum[e.checksum].push_back(id);
        }
    }
    std::vector<std::vector<std::string>> groups;
    for (auto& [_, ids] : by_checksum) {
        if (ids.size() >= 2) groups.push_back(std::move(ids));
    }
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

std::size_t Catalog::mark_stale(Timestamp now, std::int64_t threshold_seconds)
{
    if (threshold_seconds <= 0) throw Error(Errc::invalid_argument, "staleness threshold must be positive");
    std::unique_lock lock(mutex_);
    std::size_t flagged = 0;
    for (auto& [_, e] : entries_) {
        e.stale = now - e.updated_at > threshold_seconds;
        if (e.stale) ++flagged;
    }
    return flagged;
}

namespace {

struct Candidate {
    fs::path path;
    std::string format; // "csv" or "jsonl"
};

std::vector<std::string> infer_columns(const std::string& format, const std::string& bytes)
{
    if (format == "csv") return formats::csv_header(bytes);
    auto lines = formats::parse_jsonl(bytes, 100);
    return formats::jsonl_keys(lines, 100);
}

} // namespace

CrawlReport Catalog::crawl(const fs::path& root)
{
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(Errc::io_error, "crawl root " + root.string() + " is not a readable directory");
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw Error(Errc::io_error, "cannot read crawl root " + root.string() + ": " + ec.message());

    std::vector<Candidate> candidates;
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        const auto& entry = *it;
        auto ext = text::to_lower(entry.path().extension().string());
        if (ext != ".csv" && ext != ".jsonl") continue;
        std::error_code type_ec;
        if (entry.is_directory(type_ec)) continue;
        candidates.push_back({entry.path(), ext == ".csv" ? "csv" : "jsonl"});
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.path < b.path; });

    CrawlReport report;
    report.scanned_count = candidates.size();
    auto stamp = now();
    for (const auto& c : candidates) {
        std::string bytes;
        std::vector<std::string> columns;
        try {
            bytes = formats::read_file(c.path);
            columns = infer_columns(c.format, bytes);
        } catch (const Error& e) {
            report.skipped.emplace_back(c.path.string(), e.code() == Errc::io_error ? "unreadable: " + std::string(e.what())
                                                                                     : std::string(e.what()));
            continue;
        }
        auto checksum = formats::sha256_hex(bytes);

        DatasetEntry entry;
        entry.name = c.path.stem().string();
        entry.owner = "crawler";
        entry.metatags.insert(c.format);
        entry.metatags.insert(columns.begin(), columns.end());
        entry.checksum = checksum;
        entry.created_at = entry.updated_at = stamp;
        entry.notes = "discovered by crawl of " + root.string();
        entry.source_path = c.path.string();

        std::unique_lock lock(mutex_);
        auto dup = std::find_if(entries_.begin(), entries_.end(),
                                [&](const auto& kv) { return kv.second.checksum == checksum; });
        if (dup != entries_.end()) {
            report.skipped.emplace_back(c.path.string(), "duplicate of " + dup->first);
            continue;
        }
        std::string id = "ds-" + checksum.substr(0, 12);
        for (std::size_t n = 16; entries_.contains(id) && n <= checksum.size(); n += 4) id = "ds-" + checksum.substr(0, n);
        entry.id = id;
        entries_.emplace(id, std::move(entry));
        report.registered.push_back(id);
    }
    return report;
}

void Catalog::add_agreement(DataUseAgreement agreement)
{
    if (agreement.institution.empty() || agreement.data_description.empty() || agreement.duration.empty())
        throw Error(Errc::invalid_argument, "agreement needs institution, data_description and duration");
    std::unique_lock lock(mutex_);
    agreements_.push_back(std::move(agreement));
}

std::vector<DataUseAgreement> Catalog::agreements() const
{
    std::shared_lock lock(mutex_);
    return agreements_;
}

std::vector<std::string> Catalog::engines_holding(islands::IslandTag island, const std::string& object) const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [_, e] : entries_) {
        for (const auto& loc : e.locations) {
            if (loc.island == island && loc.object == object
                && std::find(out.begin(), out.end(), loc.engine) == out.end())
                out.push_back(loc.engine);
        }
    }
    return out;
}

json entry_to_json(const DatasetEntry& e)
{
    json locations = json::array();
    for (const auto& l : e.locations)
        locations.push_back({{"island", islands::to_string(l.island)}, {"engine", l.engine}, {"object", l.object}});
    return {{"id", e.id},
            {"name", e.name},
            {"owner", e.owner},
            {"locations", locations},
            {"metatags", e.metatags},
            {"checksum", e.checksum},
            {"created_at", e.created_at},
            {"updated_at", e.updated_at},
            {"stale", e.stale},
            {"notes", e.notes},
            {"source_path", e.source_path}};
}

DatasetEntry entry_from_json(const json& doc)
{
    DatasetEntry e;
    try {
        e.id = doc.at("id").get<std::string>();
        e.name = doc.value("name", "");
        e.owner = doc.value("owner", "");
        for (const auto& l : doc.value("locations", json::array()))
            e.locations.push_back({islands::island_tag_from_string(l.at("island").get<std::string>()),
                                   l.at("engine").get<std::string>(), l.at("object").get<std::string>()});
        e.metatags = doc.value("metatags", std::set<std::string>{});
        e.checksum = doc.value("checksum", "");
        e.created_at = doc.value("created_at", Timestamp{0});
        e.updated_at = doc.value("updated_at", Timestamp{0});
        e.stale = doc.value("stale", false);
        e.notes = doc.value("notes", "");
        e.source_path = doc.value("source_path", "");
    } catch (const json::exception& ex) {
        throw Error(Errc::invalid_argument, std::string("malformed dataset entry: ") + ex.what());
    }
    return e;
}

json Catalog::to_json() const
{
    std::shared_lock lock(mutex_);
    json doc{{"entries", json::array()}, {"agreements", json::array()}};
    for (const auto& [_, e] : entries_) doc["entries"].push_back(entry_to_json(e));
    for (const auto& a : agreements_) doc["agreements"].push_back(dua_to_json(a));
    return doc;
}

Catalog Catalog::from_json(const json& doc)
{
    Catalog catalog;
    for (const auto& e : doc.value("entries", json::array())) {
        auto entry = entry_from_json(e);
        validate(entry);
        auto id = entry.id;
        if (!catalog.entries_.try_emplace(id, std::move(entry)).second)
            throw Error(Errc::duplicate_id, "dataset '" + id + "' appears twice");
    }
    for (const auto& a : doc.value("agreements", json::array())) catalog.agreements_.push_back(dua_from_json(a));
    return catalog;
}

void Catalog::save(const fs::path& path) const
{
    auto doc = to_json();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write catalog " + tmp.string());
        out << doc.dump(2) << '\n';
        if (!out) throw Error(Errc::io_error, "short write on " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(Errc::io_error, "cannot rename catalog to " + path.string() + ": " + ec.message());
}

Catalog Catalog::load(const fs::path& path)
{
    auto bytes = formats::read_file(path);
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, "catalog " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

} // namespace polyhub::catalog
