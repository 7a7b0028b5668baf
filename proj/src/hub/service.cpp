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

#include "polyhub/hub/service.hpp"

#include <mutex>

#include <httplib.h>

#include "polyhub/text.hpp"

namespace polyhub::hub {

using nlohmann::json;

int http_status(Errc code) noexcept
{
    switch (code) {
    case Errc::access_denied: return 403;
    case Errc::limit_exceeded: return 422;
    case Errc::unknown_table:
    case Errc::unknown_array:
    case Errc::plan_error:
    case Errc::not_found: return 404;
    case Errc::duplicate_id:
    case Errc::duplicate_binding:
    case Errc::duplicate_key: return 409;
    case Errc::snapshot_error: return 500;
    default: return 400;
    }
}

namespace {

void reply(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, Errc code, const std::string& message)
{
    reply(res, http_status(code), {{"error", {{"code", errc_name(code)}, {"message", message}}}});
}

json parse_body(const httplib::Request& req)
{
    try {
        auto doc = json::parse(req.body);
        if (!doc.is_object()) throw Error(Errc::invalid_argument, "request body must be a JSON object");
        return doc;
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed JSON body: ") + e.what());
    }
}

std::string require_string(const json& doc, const char* field)
{
    auto it = doc.find(field);
    if (it == doc.end() || !it->is_string())
        throw Error(Errc::invalid_argument, std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

json crawl_to_json(const catalog::CrawlReport& report)
{
    json skipped = json::array();
    for (const auto& [path, reason] : report.skipped) skipped.push_back({{"path", path}, {"reason", reason}});
    return {{"scanned_count", report.scanned_count}, {"registered", report.registered}, {"skipped", skipped}};
}

} // namespace

Service::Service(Hub& hub) : hub_(hub), server_(std::make_unique<httplib::Server>())
{
    // Without SO_REUSEPORT a port already in use fails to bind.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    install_routes();
}

Service::~Service()
{
    stop();
}

void Service::install_routes()
{
    // Every handler holds the in-flight lock shared; stop() takes it exclusively.
    auto guarded = [this](auto body) {
        return [this, body](const httplib::Request& req, httplib::Response& res) {
            std::shared_lock lock(inflight_);
            try {
                body(req, res);
            } catch (const Error& e) {
                reply_error(res, e.code(), e.what());
            } catch (const std::exception& e) {
                reply(res, 500, {{"error", {{"code", "internal"}, {"message", e.what()}}}});
            }
        };
    };

    server_->Post("/query", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req);
        auto principal = require_string(body, "principal_id");
        auto text = require_string(body, "query");
        auto result = hub_.query(principal, text);
        auto doc = value_to_json(result.value);
        doc["records_appended"] = result.records_appended;
        reply(res, 200, {{"result", doc}});
    }));

    server_->Get("/catalog/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
        std::vector<std::string> keywords;
        auto q = req.get_param_value("q");
        for (auto& c : q) if (c == ',') c = ' ';
        for (const auto& part : text::split(q, ' ')) {
            auto kw = text::trim(part);
            if (!kw.empty()) keywords.emplace_back(kw);
        }
        json entries = json::array();
        for (const auto& e : hub_.catalog().search(keywords)) entries.push_back(catalog::entry_to_json(e));
        reply(res, 200, {{"entries", entries}});
    }));

    server_->Post("/ingest", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto report = hub_.ingest(ingest_spec_from_json(parse_body(req)));
        hub_.save_catalog();
        reply(res, 200, to_json(report));
    }));

    server_->Post("/crawl", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto report = hub_.crawl(require_string(parse_body(req), "root"));
        hub_.save_catalog();
        reply(res, 200, crawl_to_json(report));
    }));

    server_->Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
        auto stats = hub_.registry().stats();
        reply(res, 200, {{"status", "ok"},
                         {"engine_count", stats.engine_count},
                         {"island_count", stats.island_count},
                         {"shim_count", stats.shim_count},
                         {"cast_codec_count", stats.cast_codec_count},
                         {"catalog_size", hub_.catalog().size()},
                         {"monitor_records", hub_.monitor().size()}});
    }));

    server_->Get("/registry", guarded([this](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, hub_.registry().dump());
    }));

    server_->Post("/policies/reload", guarded([this](const httplib::Request&, httplib::Response& res) {
        hub_.reload_policies();
        reply(res, 200, {{"status", "reloaded"}});
    }));

    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        reply(res, res.status, {{"error", {{"code", "http"}, {"message", "no such endpoint or method"}}}});
    });
}

void Service::start(const std::string& host, int port)
{
    if (thread_.joinable()) throw Error(Errc::invalid_argument, "service already started");
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ <= 0) throw Error(Errc::io_error, "cannot bind " + host);
    } else {
        if (!server_->bind_to_port(host, port))
            throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void Service::stop()
{
    if (!thread_.joinable()) return;
    server_->stop();
    thread_.join();
    std::unique_lock drain(inflight_);
}

} // namespace polyhub::hub
