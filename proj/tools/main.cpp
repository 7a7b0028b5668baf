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

#include <csignal>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyhub/catalog/capacity.hpp"
#include "polyhub/catalog/dua.hpp"
#include "polyhub/error.hpp"
#include "polyhub/formats.hpp"
#include "polyhub/hub/hub.hpp"
#include "polyhub/hub/service.hpp"
#include "polyhub/text.hpp"

using namespace polyhub;
using nlohmann::json;

namespace {

struct Globals {
    std::string config_path;
    std::string data_dir;
};

hub::HubConfig load(const Globals& g)
{
    auto config = g.config_path.empty() ? hub::HubConfig{} : hub::load_config(g.config_path);
    if (!g.data_dir.empty()) config.data_dir = g.data_dir;
    config.validate();
    return config;
}

json parse_json_file(const std::string& path)
{
    auto bytes = formats::read_file(path);
    try {
        return json::parse(bytes);
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, path + ": " + e.what());
    }
}

int serve(const Globals& g, std::optional<int> port_override)
{
    auto config = load(g);
    if (port_override) config.port = *port_override;
    config.validate();

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    hub::Hub h(config);
    hub::Service service(h);
    service.start(config.host, config.port);
    std::cout << "listening on " << config.host << ":" << service.port() << std::endl;

    int sig = 0;
    sigwait(&signals, &sig);
    std::cout << "shutting down" << std::endl;
    service.stop();
    h.shutdown();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polyhub: polystore data hub"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("-c,--config", g.config_path, "key = value config file");
    app.add_option("--data-dir", g.data_dir, "override data_dir");

    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP+JSON service");
    std::optional<int> port;
    serve_cmd->add_option("--port", port, "override the configured port");

    auto* query_cmd = app.add_subcommand("query", "run a query as a principal");
    std::string principal, query_text;
    query_cmd->add_option("-p,--principal", principal, "principal id")->required();
    query_cmd->add_option("text", query_text, "query text")->required();

    auto* explain_cmd = app.add_subcommand("explain", "print the plan tree of a query");
    explain_cmd->add_option("text", query_text, "query text")->required();

    auto* ingest_cmd = app.add_subcommand("ingest", "load a CSV or JSON-lines file");
    std::string spec_file;
    ingest_cmd->add_option("spec", spec_file, "ingest spec JSON file")->required();

    auto* crawl_cmd = app.add_subcommand("crawl", "register .csv/.jsonl files under a directory");
    std::string root;
    crawl_cmd->add_option("root", root, "directory")->required();

    auto* catalog_cmd = app.add_subcommand("catalog", "catalog maintenance");
    catalog_cmd->require_subcommand(1);
    auto* search_cmd = catalog_cmd->add_subcommand("search", "ranked keyword search");
    std::vector<std::string> keywords;
    search_cmd->add_option("keywords", keywords, "keywords");
    auto* dup_cmd = catalog_cmd->add_subcommand("duplicates", "groups of entries sharing a checksum");
    auto* stale_cmd = catalog_cmd->add_subcommand("stale", "flag entries not updated within N days");
    double days = 0;
    stale_cmd->add_option("days", days, "threshold in days")->required()->check(CLI::PositiveNumber);

    auto* dua_cmd = app.add_subcommand("dua", "data use agreements");
    dua_cmd->require_subcommand(1);
    auto* render_cmd = dua_cmd->add_subcommand("render", "render an agreement JSON file");
    std::string dua_file;
    render_cmd->add_option("file", dua_file, "agreement JSON")->required();

    auto* capacity_cmd = app.add_subcommand("capacity", "usable bytes after redundancy overhead");
    std::uint64_t raw = 0;
    double overhead = 0;
    capacity_cmd->add_option("raw", raw, "raw bytes")->required();
    capacity_cmd->add_option("overhead", overhead, "overhead fraction in [0, 1)")->required();

    auto* wc_cmd = app.add_subcommand("wordcount", "case-folded word counts over files");
    std::vector<std::string> files;
    wc_cmd->add_option("files", files, "files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string message = e.what();
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg.starts_with("-")) {
                if (arg == "-c" || arg == "--config" || arg == "--data-dir") ++i;
                continue;
            }
            if (!app.get_subcommand_no_throw(arg)) message = "unknown subcommand '" + arg + "'";
            break;
        }
        std::cerr << "error: " << message << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*serve_cmd) return serve(g, port);

        if (*capacity_cmd) {
            auto usable = catalog::usable_capacity(raw, overhead);
            std::cout << usable << " bytes (" << catalog::human_bytes(usable) << ")\n";
            return 0;
        }
        if (*render_cmd) {
            std::cout << catalog::render_dua(catalog::dua_from_json(parse_json_file(dua_file)));
            return 0;
        }
        if (*wc_cmd) {
            std::vector<std::filesystem::path> paths(files.begin(), files.end());
            for (const auto& [word, count] : hub::scan_wordcount(paths)) std::cout << word << '\t' << count << '\n';
            return 0;
        }

        hub::Hub h(load(g));
        if (*explain_cmd) {
            std::cout << h.explain(query_text);
            return 0;
        }
        if (*query_cmd) {
            auto result = h.query(principal, query_text);
            std::cout << hub::value_to_json(result.value).dump(2) << '\n';
            return 0;
        }
        if (*ingest_cmd) {
            auto report = h.ingest(hub::ingest_spec_from_json(parse_json_file(spec_file)));
            h.shutdown();
            std::cout << hub::to_json(report).dump(2) << '\n';
            return 0;
        }
        if (*crawl_cmd) {
            auto report = h.crawl(root);
            h.save_catalog();
            std::cout << "scanned " << report.scanned_count << ", registered " << report.registered.size()
                      << ", skipped " << report.skipped.size() << '\n';
            for (const auto& id : report.registered) std::cout << "registered " << id << '\n';
            for (const auto& [path, reason] : report.skipped) std::cout << "skipped " << path << ": " << reason << '\n';
            return 0;
        }
        if (*search_cmd) {
            for (const auto& e : h.catalog().search(keywords))
                std::cout << e.id << '\t' << e.name << '\t' << text::join(e.metatags, ",") << '\n';
            return 0;
        }
        if (*dup_cmd) {
            for (const auto& group : h.catalog().detect_duplicates()) std::cout << text::join(group, " ") << '\n';
            return 0;
        }
        if (*stale_cmd) {
            auto threshold = static_cast<std::int64_t>(days * 86400.0);
            auto count = h.catalog().mark_stale(catalog::now(), threshold);
            h.save_catalog();
            for (const auto& e : h.catalog().entries())
                if (e.stale) std::cout << e.id << '\t' << e.name << '\n';
            std::cout << count << " stale\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << app.help();
    return 2;
}
