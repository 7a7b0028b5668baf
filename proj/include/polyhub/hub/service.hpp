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

#include <memory>
#include <shared_mutex>
#include <string>
#include <thread>

#include "polyhub/error.hpp"
#include "polyhub/hub/hub.hpp"

namespace httplib {
class Server;
}

namespace polyhub::hub {

/// HTTP status used for an error code.
int http_status(Errc code) noexcept;

/// HTTP+JSON front end for a Hub.
///
///   POST /query            {principal_id, query}
///   GET  /catalog/search   ?q=kw1,kw2 (or space separated)
///   POST /ingest           IngestSpec
///   POST /crawl            {root}
///   GET  /health
///   GET  /registry
///   POST /policies/reload
///
/// Errors are {"error": {"code", "message"}}.
class Service {
public:
    explicit Service(Hub& hub);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port.
    /// Throws Errc::io_error when the port cannot be bound.
    void start(const std::string& host, int port);
    int port() const noexcept { return port_; }
    /// Stops accepting, waits for in-flight requests, then returns.
    void stop();

private:
    void install_routes();

    Hub& hub_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::shared_mutex inflight_;
    int port_ = 0;
};

} // namespace polyhub::hub
