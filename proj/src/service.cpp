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

#include "plancraft/service.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <fstream>
#include <regex>

#include <httplib.h>

#include "plancraft/bounds.hpp"

namespace plancraft::service {

namespace fs = std::filesystem;
using io::Json;

namespace {

Reply reply(int status, const Json& doc) { return {status, io::canonical_dump(doc, io::NumberStyle::Fixed9)}; }

Reply error(int status, const std::string& message, Json extra = Json::object()) {
    extra["error"] = message;
    return reply(status, extra);
}

std::string make_id(char prefix, std::uint64_t n) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%c%06llu", prefix, static_cast<unsigned long long>(n));
    return buffer;
}

std::uint64_t id_number(const std::string& id) {
    try {
        return id.size() > 1 ? std::stoull(id.substr(1)) : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t seconds = std::chrono::system_clock::to_time_t(now);
    auto millis =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&seconds, &tm);
    char buffer[64];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[80];
    std::snprintf(out, sizeof out, "%s.%03lldZ", buffer, static_cast<long long>(millis));
    return out;
}

Json parse_body(const std::string& body) {
    if (body.empty()) return Json::object();
    return Json::parse(body);  // parse_error handled by the router
}

engine::SessionConfig config_from(const Json& doc) {
    engine::SessionConfig config;
    if (doc.contains("semantics")) config.semantics = parse_semantics(doc.at("semantics").get<std::string>());
    if (doc.contains("prompt_on_zero_loss")) config.prompt_on_zero_loss = doc.at("prompt_on_zero_loss").get<bool>();
    return config;
}

Json config_json(const engine::SessionConfig& config) {
    return {{"semantics", to_string(config.semantics)}, {"prompt_on_zero_loss", config.prompt_on_zero_loss}};
}

}  // namespace

SessionService::SessionService(std::optional<fs::path> data_dir) : data_dir_(std::move(data_dir)) {
    if (data_dir_) {
        fs::create_directories(*data_dir_ / "projects");
        fs::create_directories(*data_dir_ / "sessions");
        restore();
    }
}

SessionService::~SessionService() = default;

Reply SessionService::handle(const std::string& method, const std::string& path, const std::string& body,
                             const std::map<std::string, std::string>& query) {
    static const std::regex project_re("^/projects/([^/]+)$");
    static const std::regex project_sub_re("^/projects/([^/]+)/(bounds|ideal)$");
    static const std::regex session_re("^/sessions/([^/]+)$");
    static const std::regex session_sub_re("^/sessions/([^/]+)/(decisions|dry-run|plan)$");
    std::smatch m;
    try {
        if (path == "/projects") {
            if (method == "POST") return create_project(body);
            if (method == "GET") return list_projects();
            return error(405, "method not allowed");
        }
        if (path == "/sessions") {
            if (method == "POST") return create_session(body);
            if (method == "GET") return list_sessions();
            return error(405, "method not allowed");
        }
        if (std::regex_match(path, m, project_re)) {
            if (method == "GET") return get_project(m[1]);
            return error(405, "method not allowed");
        }
        if (std::regex_match(path, m, project_sub_re)) {
            if (method != "GET") return error(405, "method not allowed");
            return m[2] == "bounds" ? project_bounds(m[1], query) : project_ideal(m[1]);
        }
        if (std::regex_match(path, m, session_re)) {
            if (method == "GET") return get_session(m[1]);
            return error(405, "method not allowed");
        }
        if (std::regex_match(path, m, session_sub_re)) {
            const std::string sub = m[2];
            if (sub == "plan") return method == "GET" ? get_plan(m[1]) : error(405, "method not allowed");
            if (method != "POST") return error(405, "method not allowed");
            return sub == "decisions" ? post_decision(m[1], body) : dry_run(m[1], body);
        }
        return error(404, "no such route: " + path);
    } catch (const Json::exception& e) {
        return error(400, std::string("malformed request body: ") + e.what());
    } catch (const io::DocumentError& e) {
        int status = e.reason() == io::DocumentError::Reason::Syntax ||
                             e.reason() == io::DocumentError::Reason::Schema
                         ? 400
                         : 422;
        return error(status, e.what(), {{"validation", io::to_json(e.report())}});
    } catch (const IllegalDecision& e) {
        return error(422, e.what());
    } catch (const ProtocolError& e) {
        return error(409, e.what());
    } catch (const InvalidInput& e) {
        return error(422, e.what());
    }
}

void SessionService::mount(httplib::Server& server) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [key, value] : req.params) query[key] = value;
        Reply r = handle(req.method, req.path, req.body, query);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    const std::string any = R"(/.*)";
    server.Get(any, forward);
    server.Post(any, forward);
    server.Put(any, forward);
    server.Delete(any, forward);
}

std::optional<Project> SessionService::find_project(const std::string& id) {
    std::lock_guard lock(registry_mutex_);
    auto it = projects_.find(id);
    if (it == projects_.end()) return std::nullopt;
    return it->second.project;
}

std::shared_ptr<SessionService::SessionEntry> SessionService::find_session(const std::string& id) {
    std::lock_guard lock(registry_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Reply SessionService::create_project(const std::string& body) {
    Project project = io::load_project(body);
    std::string id;
    {
        std::lock_guard lock(registry_mutex_);
        id = make_id('p', ++project_counter_);
        projects_.emplace(id, ProjectEntry{project});
    }
    if (data_dir_) {
        std::ofstream out(*data_dir_ / "projects" / (id + ".json"), std::ios::binary);
        out << io::save_project(project);
    }
    return reply(201, {{"id", id},
                       {"validation", io::to_json(validate_project(project))},
                       {"topology", to_string(classify_topology(project))}});
}

Reply SessionService::list_projects() {
    std::lock_guard lock(registry_mutex_);
    Json list = Json::array();
    for (const auto& [id, entry] : projects_)
        list.push_back({{"id", id}, {"tasks", entry.project.tasks.size()}, {"workers", entry.project.workers.size()}});
    return reply(200, {{"projects", list}});
}

Reply SessionService::get_project(const std::string& id) {
    auto project = find_project(id);
    if (!project) return error(404, "unknown project '" + id + "'");
    return reply(200, {{"id", id},
                       {"project", io::to_json(*project)},
                       {"validation", io::to_json(validate_project(*project))},
                       {"topology", to_string(classify_topology(*project))}});
}

Reply SessionService::project_bounds(const std::string& id, const std::map<std::string, std::string>& query) {
    auto project = find_project(id);
    if (!project) return error(404, "unknown project '" + id + "'");
    auto semantics = PrecedenceSemantics::FinishToStart;
    if (auto it = query.find("semantics"); it != query.end()) semantics = parse_semantics(it->second);
    auto waves = bounds::t_min_wave(*project, semantics);
    return reply(200, {{"t_min", waves.total_duration},
                       {"t_max", bounds::t_max(*project)},
                       {"critical_path", bounds::critical_path_length(*project)},
                       {"semantics", to_string(semantics)},
                       {"waves", io::to_json(waves)["waves"]}});
}

Reply SessionService::project_ideal(const std::string& id) {
    auto project = find_project(id);
    if (!project) return error(404, "unknown project '" + id + "'");
    auto cost = staffing::c_min_project(*project);
    if (!cost.feasible())
        return error(422, "not enough workers to staff every task",
                     {{"infeasible", true},
                      {"failing_tasks", cost.failing_tasks()},
                      {"shortfalls", io::shortfalls_json(cost.shortfalls, *project)}});
    Json per_task = Json::object();
    for (const auto& [task, c] : cost.per_task) per_task[task] = c;
    return reply(200, {{"t_star", bounds::t_min_wave(*project).total_duration},
                       {"c_star", cost.total},
                       {"per_task", per_task}});
}

Json SessionService::session_json(const SessionEntry& entry) const {
    Json doc = io::state_json(entry.session);
    doc["id"] = entry.id;
    doc["project_id"] = entry.project_id;
    doc["next_seq"] = entry.next_seq;
    return doc;
}

void SessionService::append_log(SessionEntry& entry, const std::string& kind, const Json& payload) {
    ++entry.log_seq;
    if (!data_dir_) return;
    Json line = {{"seq", entry.log_seq}, {"timestamp", utc_timestamp()}, {"kind", kind}, {"payload", payload}};
    std::ofstream out(*data_dir_ / "sessions" / (entry.id + ".jsonl"), std::ios::app | std::ios::binary);
    out << io::canonical_dump(line, io::NumberStyle::Shortest) << '\n';
}

void SessionService::flush_events(SessionEntry& entry) {
    const auto& log = entry.session.state().log;
    for (; entry.events_logged < log.size(); ++entry.events_logged)
        append_log(entry, "event", io::to_json(log[entry.events_logged]));
}

Reply SessionService::create_session(const std::string& body) {
    Json doc = parse_body(body);
    if (!doc.contains("project_id")) return error(400, "missing project_id");
    const std::string project_id = doc.at("project_id").get<std::string>();
    auto project = find_project(project_id);
    if (!project) return error(404, "unknown project '" + project_id + "'");
    auto config = config_from(doc);

    engine::Session session(*project, config);
    session.run_until_blocked();

    std::shared_ptr<SessionEntry> entry;
    {
        std::lock_guard lock(registry_mutex_);
        auto id = make_id('s', ++session_counter_);
        entry = std::make_shared<SessionEntry>(id, project_id, std::move(session));
        sessions_.emplace(id, entry);
    }
    std::lock_guard lock(entry->mutex);
    append_log(*entry, "created",
               {{"project_id", project_id}, {"project", io::to_json(*project)}, {"config", config_json(config)}});
    flush_events(*entry);
    return reply(201, session_json(*entry));
}

Reply SessionService::list_sessions() {
    std::vector<std::shared_ptr<SessionEntry>> entries;
    {
        std::lock_guard lock(registry_mutex_);
        for (const auto& [id, entry] : sessions_) entries.push_back(entry);
    }
    Json list = Json::array();
    for (const auto& entry : entries) {
        std::lock_guard lock(entry->mutex);
        list.push_back({{"id", entry->id},
                        {"project_id", entry->project_id},
                        {"phase", engine::to_string(entry->session.state().phase)},
                        {"next_seq", entry->next_seq}});
    }
    return reply(200, {{"sessions", list}});
}

Reply SessionService::get_session(const std::string& id) {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    std::lock_guard lock(entry->mutex);
    return reply(200, session_json(*entry));
}

Reply SessionService::post_decision(const std::string& id, const std::string& body) {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    Json doc = parse_body(body);
    if (!doc.contains("seq") || !doc.at("seq").is_number_integer()) return error(400, "missing integer seq");
    if (!doc.contains("decision")) return error(400, "missing decision");

    std::lock_guard lock(entry->mutex);
    const auto seq = doc.at("seq").get<std::int64_t>();
    if (seq != static_cast<std::int64_t>(entry->next_seq))
        return error(409, "stale or out-of-order sequence number", {{"next_seq", entry->next_seq}});
    if (entry->session.state().phase != engine::Phase::AwaitingDecision)
        return error(409, "session is not awaiting a decision", {{"next_seq", entry->next_seq}});

    const Json& decision_doc = doc.at("decision");
    if (decision_doc.value("kind", "") == "abstain") {
        const std::string reason = decision_doc.value("reason", "decision maker abstained");
        entry->session.abstain(reason);
        append_log(*entry, "abstain", {{"decision_seq", seq}, {"reason", reason}});
    } else {
        auto decision = io::decision_from_json(decision_doc, entry->session.project());
        entry->session.apply_decision(decision);  // throws before any change if illegal
        entry->session.run_until_blocked();
        append_log(*entry, "decision",
                   {{"decision_seq", seq}, {"decision", io::to_json(decision, entry->session.project())}});
    }
    ++entry->next_seq;
    flush_events(*entry);
    return reply(200, session_json(*entry));
}

Reply SessionService::dry_run(const std::string& id, const std::string& body) {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    Json doc = parse_body(body);
    const Json& decision_doc = doc.contains("decision") ? doc.at("decision") : doc;

    std::lock_guard lock(entry->mutex);
    if (entry->session.state().phase != engine::Phase::AwaitingDecision)
        return error(409, "session is not awaiting a decision");
    auto decision = io::decision_from_json(decision_doc, entry->session.project());
    auto result = entry->session.dry_run(decision);
    Json out = {{"projected_t_delta", result.projected_t_delta},
                {"projected_c_delta", result.projected_c_delta},
                {"phase", engine::to_string(result.phase)}};
    out["next_prompt"] = result.next_prompt ? io::to_json(*result.next_prompt, entry->session.project()) : Json();
    return reply(200, out);
}

Reply SessionService::get_plan(const std::string& id) {
    auto entry = find_session(id);
    if (!entry) return error(404, "unknown session '" + id + "'");
    std::lock_guard lock(entry->mutex);
    if (entry->session.state().phase != engine::Phase::Completed)
        return error(409, "session has not completed",
                     {{"phase", engine::to_string(entry->session.state().phase)}});
    return {200, io::save_plan(entry->session.plan(), entry->session.project())};
}

void SessionService::restore() {
    for (const auto& file : fs::directory_iterator(*data_dir_ / "projects")) {
        if (file.path().extension() != ".json") continue;
        const std::string id = file.path().stem().string();
        projects_.emplace(id, ProjectEntry{io::load_project_file(file.path().string())});
        project_counter_ = std::max(project_counter_, id_number(id));
    }
    for (const auto& file : fs::directory_iterator(*data_dir_ / "sessions")) {
        if (file.path().extension() != ".jsonl") continue;
        const std::string id = file.path().stem().string();
        std::ifstream in(file.path(), std::ios::binary);
        std::string line;
        std::shared_ptr<SessionEntry> entry;
        std::uint64_t lines = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ++lines;
            Json record = Json::parse(line);
            const std::string kind = record.at("kind").get<std::string>();
            const Json& payload = record.at("payload");
            if (kind == "created") {
                Project project = io::project_from_json(payload.at("project"));
                engine::Session session(project, config_from(payload.at("config")));
                session.run_until_blocked();
                entry = std::make_shared<SessionEntry>(id, payload.at("project_id").get<std::string>(),
                                                       std::move(session));
            } else if (!entry) {
                throw InternalError("session log '" + file.path().string() + "' does not start with 'created'");
            } else if (kind == "decision") {
                entry->session.apply_decision(io::decision_from_json(payload.at("decision"), entry->session.project()));
                entry->session.run_until_blocked();
                ++entry->next_seq;
            } else if (kind == "abstain") {
                entry->session.abstain(payload.at("reason").get<std::string>());
                ++entry->next_seq;
            }
        }
        if (!entry) continue;
        entry->log_seq = lines;
        entry->events_logged = entry->session.state().log.size();
        sessions_.emplace(id, entry);
        session_counter_ = std::max(session_counter_, id_number(id));
    }
}

namespace {

std::atomic<httplib::Server*> active_server{nullptr};

extern "C" void on_signal(int) {
    if (auto* server = active_server.load()) server->stop();
}

}  // namespace

int serve(SessionService& service, const std::string& host, int port) {
    httplib::Server server;
    service.mount(server);
    active_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    bool ok = server.listen(host, port);
    active_server = nullptr;
    return ok ? 0 : 1;
}

void stop_serving() {
    if (auto* server = active_server.load()) server->stop();
}

}  // namespace plancraft::service
