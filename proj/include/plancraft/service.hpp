/*
Copyright 2026 The Plancraft Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "plancraft/engine.hpp"
#include "plancraft/io.hpp"

namespace httplib {
class Server;
}

namespace plancraft::service {

struct Reply {
    int status = 200;
    std::string body;  // canonical document text
};

/// Projects and concession sessions behind a path-based request API.
///
/// Sessions are event-sourced: with a data directory, every session keeps an
/// append-only log of one JSON record per line ({seq, timestamp, kind,
/// payload}) and is rebuilt from it on start. Mutations of one session are
/// serialized; different sessions never share mutable state.
class SessionService {
public:
    explicit SessionService(std::optional<std::filesystem::path> data_dir = std::nullopt);
    ~SessionService();

    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    /// Routes one request. `query` holds decoded query parameters.
    Reply handle(const std::string& method, const std::string& path, const std::string& body,
                 const std::map<std::string, std::string>& query = {});

    /// Registers every route on an HTTP server.
    void mount(httplib::Server& server);

private:
    struct ProjectEntry {
        Project project;
    };
    struct SessionEntry {
        std::mutex mutex;
        std::string id;
        std::string project_id;
        engine::Session session;
        std::uint64_t next_seq = 1;
        std::uint64_t log_seq = 0;
        std::size_t events_logged = 0;

        SessionEntry(std::string id_, std::string project_id_, engine::Session session_)
            : id(std::move(id_)), project_id(std::move(project_id_)), session(std::move(session_)) {}
    };

    Reply create_project(const std::string& body);
    Reply list_projects();
    Reply get_project(const std::string& id);
    Reply project_bounds(const std::string& id, const std::map<std::string, std::string>& query);
    Reply project_ideal(const std::string& id);
    Reply create_session(const std::string& body);
    Reply list_sessions();
    Reply get_session(const std::string& id);
    Reply post_decision(const std::string& id, const std::string& body);
    Reply dry_run(const std::string& id, const std::string& body);
    Reply get_plan(const std::string& id);

    std::optional<Project> find_project(const std::string& id);
    std::shared_ptr<SessionEntry> find_session(const std::string& id);
    io::Json session_json(const SessionEntry& entry) const;

    void append_log(SessionEntry& entry, const std::string& kind, const io::Json& payload);
    void flush_events(SessionEntry& entry);
    void restore();

    std::optional<std::filesystem::path> data_dir_;
    std::mutex registry_mutex_;
    std::map<std::string, ProjectEntry> projects_;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
    std::uint64_t project_counter_ = 0;
    std::uint64_t session_counter_ = 0;
};

/// Blocks serving HTTP until stop_serving() or SIGINT/SIGTERM.
int serve(SessionService& service, const std::string& host, int port);
void stop_serving();

}  // namespace plancraft::service
