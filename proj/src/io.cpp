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

#include "plancraft/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plancraft::io {

namespace {

void write_number(std::string& out, double value, NumberStyle style) {
    if (!std::isfinite(value)) {
        out += "null";
        return;
    }
    if (style == NumberStyle::Fixed9) {
        out += fixed9(value);
        return;
    }
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    out.append(buffer, end);
}

void write(std::string& out, const Json& value, NumberStyle style) {
    switch (value.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = value.begin(); it != value.end(); ++it) {  // std::map: keys sorted
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                write(out, it.value(), style);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : value) {
                if (!first) out += ',';
                first = false;
                write(out, item, style);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float:
            write_number(out, value.get<double>(), style);
            break;
        default:
            out += value.dump();
    }
}

[[noreturn]] void schema_error(const std::string& message) {
    throw DocumentError(DocumentError::Reason::Schema, message);
}

const Json& field(const Json& doc, const char* name) {
    if (!doc.is_object() || !doc.contains(name)) schema_error(std::string("missing field '") + name + "'");
    return doc.at(name);
}

double real(const Json& value, const char* what) {
    if (!value.is_number()) schema_error(std::string(what) + " must be a number");
    return value.get<double>();
}

std::optional<double> optional_real(const Json& doc, const char* name) {
    if (!doc.contains(name) || doc.at(name).is_null()) return std::nullopt;
    return real(doc.at(name), name);
}

std::string text(const Json& value, const char* what) {
    if (!value.is_string()) schema_error(std::string(what) + " must be a string");
    return value.get<std::string>();
}

std::vector<std::string> string_list(const Json& value, const char* what) {
    if (!value.is_array()) schema_error(std::string(what) + " must be a list");
    std::vector<std::string> out;
    for (const auto& item : value) out.push_back(text(item, what));
    return out;
}

std::vector<double> real_list(const Json& value, const char* what) {
    if (!value.is_array()) schema_error(std::string(what) + " must be a list");
    std::vector<double> out;
    for (const auto& item : value) out.push_back(real(item, what));
    return out;
}

const std::string& work_type_label(const Project& project, std::size_t q) {
    if (q >= project.work_types.size()) throw InvalidInput("work type index out of range");
    return project.work_types[q];
}

// Fixed-point rendering stores reals as doubles in the Json tree; the writer
// decides the text form.
Json real_json(double value) { return Json(static_cast<double>(value)); }

}  // namespace

std::string fixed9(double value) {
    if (std::abs(value) < 5e-10) value = 0.0;
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.9f", value);
    return buffer;
}

std::string canonical_dump(const Json& value, NumberStyle style) {
    std::string out;
    write(out, value, style);
    return out;
}

DocumentError::DocumentError(Reason reason, const std::string& message, ValidationReport report)
    : InvalidInput(message), reason_(reason), report_(std::move(report)) {}

std::size_t work_type_index(const Project& project, const std::string& label) {
    for (std::size_t q = 0; q < project.work_types.size(); ++q)
        if (project.work_types[q] == label) return q;
    throw InvalidInput("unknown work type '" + label + "'");
}

Json to_json(const Worker& worker) {
    Json skills = Json::array();
    for (bool s : worker.skills) skills.push_back(s ? 1 : 0);
    Json rates = Json::array();
    for (double c : worker.rates) rates.push_back(real_json(c));
    return {{"id", worker.id}, {"skills", skills}, {"rates", rates}};
}

Worker worker_from_json(const Json& doc, std::size_t work_type_count) {
    Worker w;
    w.id = text(field(doc, "id"), "worker id");
    const Json& skills = field(doc, "skills");
    if (!skills.is_array()) schema_error("worker skills must be a list");
    for (const auto& s : skills) {
        if (s.is_boolean())
            w.skills.push_back(s.get<bool>());
        else if (s.is_number_integer() && (s.get<int>() == 0 || s.get<int>() == 1))
            w.skills.push_back(s.get<int>() == 1);
        else
            schema_error("worker skills must be 0/1 entries");
    }
    w.rates = real_list(field(doc, "rates"), "worker rates");
    if (work_type_count != 0 && (w.skills.size() != work_type_count || w.rates.size() != work_type_count))
        schema_error("worker '" + w.id + "' needs one skill and one rate per work type");
    return w;
}

Json to_json(const Project& project) {
    Json tasks = Json::array();
    for (const auto& t : project.tasks) {
        Json work = Json::array();
        for (double s : t.work) work.push_back(real_json(s));
        Json task = {{"id", t.id},
                     {"predecessors", Json(std::vector<std::string>(t.predecessors.begin(), t.predecessors.end()))},
                     {"work", work},
                     {"resources", Json(t.resources)},
                     {"duration", real_json(t.duration)}};
        if (t.declared_cost) task["declared_cost"] = real_json(*t.declared_cost);
        tasks.push_back(std::move(task));
    }
    Json workers = Json::array();
    for (const auto& w : project.workers) workers.push_back(to_json(w));
    Json doc = {{"schema_version", kSchemaVersion},
                {"work_types", project.work_types},
                {"resource_types", project.resource_types},
                {"tasks", tasks},
                {"workers", workers}};
    if (project.budget) doc["budget"] = real_json(*project.budget);
    if (project.deadline) doc["deadline"] = real_json(*project.deadline);
    return doc;
}

Project project_from_json(const Json& doc) {
    if (!doc.is_object()) schema_error("project document must be an object");
    const Json& version = field(doc, "schema_version");
    if (!version.is_number_integer()) schema_error("schema_version must be an integer");
    if (version.get<int>() != kSchemaVersion)
        throw DocumentError(DocumentError::Reason::UnsupportedVersion,
                            "unsupported schema_version " + version.dump() + " (expected " +
                                std::to_string(kSchemaVersion) + ")");
    Project p;
    p.work_types = string_list(field(doc, "work_types"), "work_types");
    if (doc.contains("resource_types")) p.resource_types = string_list(doc.at("resource_types"), "resource_types");
    p.budget = optional_real(doc, "budget");
    p.deadline = optional_real(doc, "deadline");

    const Json& tasks = field(doc, "tasks");
    if (!tasks.is_array()) schema_error("tasks must be a list");
    for (const auto& item : tasks) {
        Task t;
        t.id = text(field(item, "id"), "task id");
        if (item.contains("predecessors"))
            for (auto& id : string_list(item.at("predecessors"), "predecessors")) t.predecessors.insert(id);
        t.work = real_list(field(item, "work"), "work");
        if (item.contains("resources")) {
            const Json& res = item.at("resources");
            if (!res.is_array()) schema_error("resources must be a list");
            for (const auto& r : res) {
                if (!r.is_number_integer()) schema_error("resources must be integers");
                t.resources.push_back(r.get<std::int64_t>());
            }
        }
        t.duration = real(field(item, "duration"), "duration");
        t.declared_cost = optional_real(item, "declared_cost");
        p.tasks.push_back(std::move(t));
    }
    if (doc.contains("workers")) {
        const Json& workers = doc.at("workers");
        if (!workers.is_array()) schema_error("workers must be a list");
        for (const auto& item : workers) p.workers.push_back(worker_from_json(item, 0));
    }
    return p;
}

Project load_project(std::string_view text_in) {
    Json doc;
    try {
        doc = Json::parse(text_in);
    } catch (const Json::parse_error& e) {
        throw DocumentError(DocumentError::Reason::Syntax, std::string("malformed document: ") + e.what());
    }
    Project project = project_from_json(doc);
    auto report = validate_project(project);
    if (!report.valid()) {
        std::string message = ValidationError(report).what();
        throw DocumentError(DocumentError::Reason::Validation, message, std::move(report));
    }
    return project;
}

Project load_project_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_project(buffer.str());
}

std::string save_project(const Project& project) {
    return canonical_dump(to_json(project), NumberStyle::Shortest) + "\n";
}

Json to_json(const ValidationReport& report) {
    Json violations = Json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"kind", to_string(v.kind)}, {"subject", v.subject}, {"message", v.message}});
    return {{"valid", report.valid()}, {"violations", violations}};
}

Json to_json(const bounds::WaveSchedule& schedule) {
    Json waves = Json::array();
    for (const auto& wave : schedule.waves) {
        Json entries = Json::array();
        for (const auto& e : wave.entries)
            entries.push_back({{"task", e.task},
                               {"start_offset", real_json(e.start_offset)},
                               {"completion", real_json(e.completion)}});
        waves.push_back({{"start_time", real_json(wave.start_time)}, {"entries", entries}});
    }
    return {{"waves", waves}, {"total_duration", real_json(schedule.total_duration)}};
}

Json shortfalls_json(const std::vector<staffing::Shortfall>& shortfalls, const Project& project) {
    Json out = Json::array();
    for (const auto& s : shortfalls)
        out.push_back({{"task", s.task},
                       {"work_type", work_type_label(project, s.work_type)},
                       {"demand", s.demand},
                       {"unmet", s.unmet}});
    return out;
}

Json assignment_json(const std::vector<staffing::Assignment>& cells, const Project& project) {
    Json out = Json::array();
    for (const auto& c : cells)
        out.push_back({{"worker", c.worker}, {"task", c.task}, {"work_type", work_type_label(project, c.work_type)}});
    return out;
}

Json to_json(const engine::DecisionPrompt& prompt, const Project& project) {
    Json ready = Json::array();
    for (const auto& r : prompt.ready)
        ready.push_back({{"id", r.id}, {"duration", real_json(r.duration)}, {"total_demand", r.total_demand}});
    return {{"case", engine::to_string(prompt.kind)},
            {"clock", real_json(prompt.clock)},
            {"ready", ready},
            {"running_empty", prompt.running_empty},
            {"shortfalls", shortfalls_json(prompt.shortfalls, project)},
            {"proposed", assignment_json(prompt.proposed, project)},
            {"proposed_cost", real_json(prompt.proposed_cost)},
            {"baseline_cost", real_json(prompt.baseline_cost)},
            {"overrun", real_json(prompt.overrun)},
            {"defer_delay_bound", real_json(prompt.defer_delay_bound)}};
}

engine::DecisionPrompt prompt_from_json(const Json& doc, const Project& project) {
    engine::DecisionPrompt p;
    const std::string kind = text(field(doc, "case"), "case");
    if (kind == "infeasible")
        p.kind = engine::PromptCase::Infeasible;
    else if (kind == "cost-overrun")
        p.kind = engine::PromptCase::CostOverrun;
    else
        schema_error("unknown prompt case '" + kind + "'");
    p.clock = real(field(doc, "clock"), "clock");
    for (const auto& r : field(doc, "ready"))
        p.ready.push_back({text(field(r, "id"), "id"), real(field(r, "duration"), "duration"),
                           field(r, "total_demand").get<std::int64_t>()});
    p.running_empty = field(doc, "running_empty").get<bool>();
    for (const auto& s : field(doc, "shortfalls"))
        p.shortfalls.push_back({text(field(s, "task"), "task"),
                                work_type_index(project, text(field(s, "work_type"), "work_type")),
                                field(s, "demand").get<std::int64_t>(), field(s, "unmet").get<std::int64_t>()});
    for (const auto& c : field(doc, "proposed"))
        p.proposed.push_back({text(field(c, "worker"), "worker"), text(field(c, "task"), "task"),
                              work_type_index(project, text(field(c, "work_type"), "work_type"))});
    p.proposed_cost = real(field(doc, "proposed_cost"), "proposed_cost");
    p.baseline_cost = real(field(doc, "baseline_cost"), "baseline_cost");
    p.overrun = real(field(doc, "overrun"), "overrun");
    p.defer_delay_bound = real(field(doc, "defer_delay_bound"), "defer_delay_bound");
    return p;
}

Json to_json(const engine::Decision& decision, const Project& /*project*/) {
    Json doc = {{"kind", engine::decision_kind(decision)}};
    if (const auto* add = std::get_if<engine::AddWorkers>(&decision)) {
        Json workers = Json::array();
        for (const auto& w : add->workers) workers.push_back(to_json(w));
        doc["workers"] = workers;
    } else if (const auto* defer = std::get_if<engine::DeferTasks>(&decision)) {
        doc["tasks"] = std::vector<std::string>(defer->tasks.begin(), defer->tasks.end());
    }
    return doc;
}

engine::Decision decision_from_json(const Json& doc, const Project& project) {
    const std::string kind = text(field(doc, "kind"), "kind");
    if (kind == "accept-cost") return engine::AcceptCost{};
    if (kind == "defer-tasks") {
        engine::DeferTasks defer;
        for (auto& id : string_list(field(doc, "tasks"), "tasks")) defer.tasks.insert(id);
        return defer;
    }
    if (kind == "add-workers") {
        engine::AddWorkers add;
        const Json& workers = field(doc, "workers");
        if (!workers.is_array()) schema_error("workers must be a list");
        for (const auto& w : workers) add.workers.push_back(worker_from_json(w, project.work_type_count()));
        return add;
    }
    schema_error("unknown decision kind '" + kind + "'");
}

Json trace_json(const std::vector<engine::ConcessionStep>& trace, const Project& project) {
    Json out = Json::array();
    for (const auto& step : trace)
        out.push_back({{"prompt", to_json(step.prompt, project)}, {"decision", to_json(step.decision, project)}});
    return out;
}

Json to_json(const engine::Plan& plan, const Project& project) {
    Json schedule = Json::array();
    for (const auto& s : plan.schedule) {
        Json crew = Json::array();
        for (const auto& c : s.crew)
            crew.push_back({{"worker", c.worker}, {"work_type", work_type_label(project, c.work_type)}});
        schedule.push_back({{"id", s.id},
                            {"start", real_json(s.start)},
                            {"finish", real_json(s.finish)},
                            {"cost", real_json(s.cost)},
                            {"crew", crew}});
    }
    return {{"schema_version", kSchemaVersion},
            {"hierarchy", plan.hierarchy.ordering},
            {"schedule", schedule},
            {"total_duration", real_json(plan.total_duration)},
            {"total_cost", real_json(plan.total_cost)},
            {"trace", trace_json(plan.trace, project)}};
}

Json to_json(const engine::SessionEvent& event) {
    return {{"seq", event.seq},
            {"kind", engine::to_string(event.kind)},
            {"payload",
             {{"clock", real_json(event.clock)},
              {"committed_cost", real_json(event.committed_cost)},
              {"tasks", event.tasks},
              {"workers", event.workers},
              {"amount", real_json(event.amount)},
              {"detail", event.detail},
              {"free_workers", event.free_workers},
              {"busy_workers", event.busy_workers},
              {"pool_size", event.pool_size}}}};
}

Json to_json(const engine::StalemateReport& report, const Project& project) {
    Json doc = {{"reason", report.reason},
                {"clock", real_json(report.clock)},
                {"committed_cost", real_json(report.committed_cost)},
                {"unfinished", report.unfinished}};
    doc["last_prompt"] = report.last_prompt ? to_json(*report.last_prompt, project) : Json();
    return doc;
}

Json state_json(const engine::Session& session) {
    const auto& st = session.state();
    const Project& project = session.project();
    Json running = Json::array();
    std::size_t busy = 0;
    for (const auto& [id, run] : st.running) {
        Json crew = Json::array();
        for (const auto& c : run.crew)
            crew.push_back({{"worker", c.worker}, {"work_type", work_type_label(project, c.work_type)}});
        busy += run.crew.size();
        running.push_back({{"id", id},
                           {"start", real_json(run.start)},
                           {"remaining", real_json(run.remaining)},
                           {"cost", real_json(run.cost)},
                           {"crew", crew}});
    }
    Json pool = Json::array();
    for (const auto& w : st.pool) pool.push_back(w.id);
    auto ideal = session.ideal();
    Json doc = {{"phase", engine::to_string(st.phase)},
                {"clock", real_json(st.clock)},
                {"committed_cost", real_json(st.committed_cost)},
                {"pending", st.pending},
                {"ready", st.ready},
                {"running", running},
                {"completed", st.completed},
                {"free_workers", st.free_workers},
                {"busy_workers", busy},
                {"pool", pool},
                {"workers_added", st.workers_added},
                {"ideal", {{"t_star", real_json(ideal.t_star)}, {"c_star", real_json(ideal.c_star)}}},
                {"staffing_feasible", st.c_min_reference.has_value()},
                {"decisions_applied", session.decisions_applied()},
                {"semantics", to_string(session.config().semantics)},
                {"trace", trace_json(st.trace, project)}};
    doc["prompt"] = st.prompt && st.phase == engine::Phase::AwaitingDecision ? to_json(*st.prompt, project) : Json();
    doc["stalemate"] = st.stalemate ? to_json(*st.stalemate, project) : Json();
    return doc;
}

std::string save_plan(const engine::Plan& plan, const Project& project) {
    return canonical_dump(to_json(plan, project), NumberStyle::Fixed9) + "\n";
}

std::string schedule_csv(const engine::Plan& plan, const Project& project) {
    std::string out = "id,start,finish,crew,cost\n";
    for (const auto& s : plan.schedule) {
        std::string crew;
        for (const auto& c : s.crew) {
            if (!crew.empty()) crew += ';';
            crew += c.worker + ":" + work_type_label(project, c.work_type);
        }
        out += s.id + "," + fixed9(s.start) + "," + fixed9(s.finish) + "," + crew + "," + fixed9(s.cost) + "\n";
    }
    return out;
}

}  // namespace plancraft::io
