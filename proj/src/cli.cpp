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

#include "plancraft/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "plancraft/bounds.hpp"
#include "plancraft/engine.hpp"
#include "plancraft/io.hpp"
#include "plancraft/policy.hpp"
#include "plancraft/service.hpp"

namespace plancraft::cli {

namespace {

using io::fixed9;

void print_report(std::ostream& out, const ValidationReport& report) {
    for (const auto& v : report.violations) {
        out << to_string(v.kind);
        if (!v.subject.empty()) out << " [" << v.subject << "]";
        out << ": " << v.message << '\n';
    }
}

void print_shortfalls(std::ostream& out, const std::vector<staffing::Shortfall>& shortfalls, const Project& project) {
    for (const auto& s : shortfalls)
        out << "  task " << s.task << " work type " << project.work_types.at(s.work_type) << ": needs " << s.demand
            << ", short by " << s.unmet << '\n';
}

// Loads a project, printing why it failed. nullopt means exit 1.
std::optional<Project> load(const std::string& path, std::ostream& err) {
    try {
        return io::load_project_file(path);
    } catch (const io::DocumentError& e) {
        err << "error: " << path << ": " << e.what() << '\n';
        print_report(err, e.report());
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
    }
    return std::nullopt;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << content;
}

// Interactive answers for `--policy external`: one line per prompt.
// Prompts go to the error stream so the plan summary on `out` stays clean.
policy::ExternalSource terminal_source(const Project& project, std::istream& in, std::ostream& out) {
    return [&project, &in, &out](const engine::DecisionPrompt& prompt,
                                 const policy::StateSummary& summary) -> std::optional<engine::Decision> {
        out << "prompt " << io::canonical_dump(io::to_json(prompt, project), io::NumberStyle::Fixed9) << '\n'
            << "clock " << fixed9(summary.clock) << " cost " << fixed9(summary.committed_cost) << '\n'
            << "answer with: accept | defer <task>... | add <worker-json> | abstain\n> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) return std::nullopt;
        std::istringstream words(line);
        std::string verb;
        words >> verb;
        if (verb == "accept") return engine::Decision{engine::AcceptCost{}};
        if (verb == "defer") {
            engine::DeferTasks defer;
            for (std::string id; words >> id;) defer.tasks.insert(id);
            return engine::Decision{defer};
        }
        if (verb == "add") {
            std::string rest;
            std::getline(words, rest);
            auto doc = io::Json::parse(rest);
            engine::AddWorkers add;
            if (doc.is_array())
                for (const auto& w : doc) add.workers.push_back(io::worker_from_json(w, project.work_type_count()));
            else
                add.workers.push_back(io::worker_from_json(doc, project.work_type_count()));
            return engine::Decision{add};
        }
        return std::nullopt;
    };
}

int run_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    auto project = load(path, err);
    if (!project) return 1;
    out << "valid: " << project->tasks.size() << " tasks, " << project->workers.size() << " workers, "
        << project->work_types.size() << " work types, topology " << to_string(classify_topology(*project))
        << '\n';
    return 0;
}

int run_bounds(const std::string& path, const std::string& semantics_text, std::ostream& out, std::ostream& err) {
    auto project = load(path, err);
    if (!project) return 1;
    auto semantics = parse_semantics(semantics_text);
    auto waves = bounds::t_min_wave(*project, semantics);
    out << "t_min " << fixed9(waves.total_duration) << '\n'
        << "t_max " << fixed9(bounds::t_max(*project)) << '\n'
        << "critical_path " << fixed9(bounds::critical_path_length(*project)) << '\n';
    for (std::size_t k = 0; k < waves.waves.size(); ++k) {
        out << "wave " << k + 1 << " @" << fixed9(waves.waves[k].start_time) << ':';
        for (const auto& e : waves.waves[k].entries) out << ' ' << e.task << "->" << fixed9(e.completion);
        out << '\n';
    }
    return 0;
}

int run_ideal(const std::string& path, const std::string& semantics_text, std::ostream& out, std::ostream& err) {
    auto project = load(path, err);
    if (!project) return 1;
    auto cost = staffing::c_min_project(*project);
    if (!cost.feasible()) {
        out << "infeasible: not enough workers for";
        for (const auto& id : cost.failing_tasks()) out << ' ' << id;
        out << '\n';
        print_shortfalls(out, cost.shortfalls, *project);
        return 1;
    }
    auto t_star = bounds::t_min_wave(*project, parse_semantics(semantics_text)).total_duration;
    out << "t_star " << fixed9(t_star) << '\n' << "c_star " << fixed9(cost.total) << '\n';
    for (const auto& [task, c] : cost.per_task) out << "c_min " << task << ' ' << fixed9(c) << '\n';
    return 0;
}

struct PlanOptions {
    std::string policy = "always-accept";
    std::string semantics = "start";
    bool prompt_on_zero = false;
    std::string trace_path, out_path, csv_path;
};

int run_plan(const std::string& path, const PlanOptions& options, std::ostream& out, std::ostream& err,
             std::istream& in) {
    auto project = load(path, err);
    if (!project) return 1;
    policy::Policy chosen = policy::parse_policy(options.policy);
    if (chosen.kind == policy::Kind::External) chosen.external = terminal_source(*project, in, err);

    engine::SessionConfig config;
    config.semantics = parse_semantics(options.semantics);
    config.prompt_on_zero_loss = options.prompt_on_zero;
    auto outcome = engine::run_to_completion(*project, chosen, config);

    const auto& trace = outcome.plan ? outcome.plan->trace : outcome.final_state.trace;
    if (!options.trace_path.empty())
        write_file(options.trace_path,
                   io::canonical_dump(io::trace_json(trace, *project), io::NumberStyle::Fixed9) + "\n");

    if (outcome.phase != engine::Phase::Completed) {
        const auto& report = *outcome.stalemate;
        out << "phase stalemate\n"
            << "reason " << report.reason << '\n'
            << "clock " << fixed9(report.clock) << '\n'
            << "committed_cost " << fixed9(report.committed_cost) << '\n'
            << "unfinished";
        for (const auto& id : report.unfinished) out << ' ' << id;
        out << '\n';
        if (report.last_prompt && !report.last_prompt->shortfalls.empty()) {
            out << "shortfalls at the last prompt:\n";
            print_shortfalls(out, report.last_prompt->shortfalls, *project);
        }
        auto cost = staffing::c_min_project(*project);
        if (!cost.feasible()) {
            out << "tasks that cannot be staffed even alone:";
            for (const auto& id : cost.failing_tasks()) out << ' ' << id;
            out << '\n';
            print_shortfalls(out, cost.shortfalls, *project);
        }
        return 1;
    }

    const auto& plan = *outcome.plan;
    out << "phase completed\n"
        << "total_duration " << fixed9(plan.total_duration) << '\n'
        << "total_cost " << fixed9(plan.total_cost) << '\n'
        << "hierarchy";
    for (const auto& id : plan.hierarchy.ordering) out << ' ' << id;
    out << '\n' << "concessions " << plan.trace.size() << '\n' << io::schedule_csv(plan, *project);

    if (!options.out_path.empty()) write_file(options.out_path, io::save_plan(plan, *project));
    if (!options.csv_path.empty()) write_file(options.csv_path, io::schedule_csv(plan, *project));
    return 0;
}

int run_serve(int port, const std::string& data_dir, const std::string& host, std::ostream& out) {
    std::optional<std::filesystem::path> dir;
    if (!data_dir.empty()) dir = data_dir;
    service::SessionService service(dir);
    out << "serving on " << host << ':' << port << (dir ? " data-dir " + dir->string() : std::string()) << '\n'
        << std::flush;
    return service::serve(service, host, port);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    CLI::App app{"Task hierarchy planning by sequential concessions", "plancraft"};
    app.require_subcommand(1);

    std::string file;
    std::string semantics = "finish";

    auto* validate = app.add_subcommand("validate", "check a project document");
    validate->add_option("file", file, "project document")->required();

    auto* bounds_cmd = app.add_subcommand("bounds", "duration range and critical path");
    bounds_cmd->add_option("file", file, "project document")->required();
    bounds_cmd->add_option("--semantics", semantics, "finish|start")->check(CLI::IsMember({"finish", "start"}));

    auto* ideal = app.add_subcommand("ideal", "ideal point (minimum duration, minimum cost)");
    ideal->add_option("file", file, "project document")->required();
    ideal->add_option("--semantics", semantics, "finish|start")->check(CLI::IsMember({"finish", "start"}));

    PlanOptions plan_options;
    auto* plan = app.add_subcommand("plan", "build a task hierarchy with a decision policy");
    plan->add_option("file", file, "project document")->required();
    plan->add_option("--policy", plan_options.policy, "always-accept | budget:<real> | deadline:<real> | external")
        ->required()
        ->check(CLI::Validator(
            [](std::string& spec) -> std::string {
                try {
                    policy::parse_policy(spec);
                } catch (const InvalidInput& e) {
                    return e.what();
                }
                return {};
            },
            "POLICY"));
    plan->add_option("--semantics", plan_options.semantics, "start|finish (default start)")
        ->check(CLI::IsMember({"finish", "start"}));
    plan->add_flag("--prompt-on-zero", plan_options.prompt_on_zero, "prompt even for zero-loss waves");
    plan->add_option("--trace", plan_options.trace_path, "write the concession trace here");
    plan->add_option("--out", plan_options.out_path, "write the plan document here");
    plan->add_option("--csv", plan_options.csv_path, "write the schedule table here");

    int port = 8080;
    std::string data_dir;
    std::string host = "127.0.0.1";
    if (const char* env = std::getenv("PLANCRAFT_PORT")) port = std::atoi(env);
    if (const char* env = std::getenv("PLANCRAFT_DATA_DIR")) data_dir = env;
    auto* serve = app.add_subcommand("serve", "run the session service");
    serve->add_option("--port", port, "listen port (env PLANCRAFT_PORT)");
    serve->add_option("--data-dir", data_dir, "session log directory (env PLANCRAFT_DATA_DIR)");
    serve->add_option("--host", host, "bind address");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (*validate) return run_validate(file, out, err);
        if (*bounds_cmd) return run_bounds(file, semantics, out, err);
        if (*ideal) return run_ideal(file, semantics, out, err);
        if (*plan) return run_plan(file, plan_options, out, err, in);
        if (*serve) return run_serve(port, data_dir, host, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace plancraft::cli
