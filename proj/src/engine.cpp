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

#include "plancraft/engine.hpp"

#include <algorithm>
#include <limits>

#include "plancraft/bounds.hpp"

namespace plancraft::engine {

std::string to_string(PromptCase kind) {
    return kind == PromptCase::Infeasible ? "infeasible" : "cost-overrun";
}

std::string decision_kind(const Decision& decision) {
    struct Visitor {
        std::string operator()(const AddWorkers&) const { return "add-workers"; }
        std::string operator()(const DeferTasks&) const { return "defer-tasks"; }
        std::string operator()(const AcceptCost&) const { return "accept-cost"; }
    };
    return std::visit(Visitor{}, decision);
}

bool deferral_allowed(const DecisionPrompt& prompt, const std::set<TaskId>& tasks) {
    if (tasks.empty()) return false;
    for (const auto& id : tasks) {
        bool is_ready = std::any_of(prompt.ready.begin(), prompt.ready.end(),
                                    [&](const ReadyTask& r) { return r.id == id; });
        if (!is_ready) return false;
    }
    return !(prompt.running_empty && tasks.size() >= prompt.ready.size());
}

std::string to_string(Phase phase) {
    switch (phase) {
        case Phase::Advancing: return "advancing";
        case Phase::AwaitingDecision: return "awaiting-decision";
        case Phase::Completed: return "completed";
        case Phase::Stalemate: return "stalemate";
    }
    return "unknown";
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::SessionStarted: return "session-started";
        case EventKind::TasksAdmitted: return "tasks-admitted";
        case EventKind::Prompted: return "prompted";
        case EventKind::DecisionApplied: return "decision-applied";
        case EventKind::WaveCommitted: return "wave-committed";
        case EventKind::ClockAdvanced: return "clock-advanced";
        case EventKind::TasksCompleted: return "tasks-completed";
        case EventKind::SessionCompleted: return "session-completed";
        case EventKind::Stalemate: return "stalemate";
    }
    return "unknown";
}

Session::Session(Project project, SessionConfig config) : project_(std::move(project)), config_(config) {
    require_valid(project_);
    for (std::size_t i = 0; i < project_.tasks.size(); ++i) task_index_.emplace(project_.tasks[i].id, i);

    state_.pool = project_.workers;
    for (const auto& w : state_.pool) state_.free_workers.insert(w.id);
    for (const auto& t : project_.tasks) state_.pending.insert(t.id);

    state_.t_min_reference = bounds::t_min_wave(project_, PrecedenceSemantics::FinishToStart).total_duration;
    auto c_min = staffing::c_min_project(project_);
    if (c_min.feasible()) state_.c_min_reference = c_min.total;

    log(EventKind::SessionStarted, {}, {}, state_.t_min_reference, to_string(config_.semantics));
}

staffing::IdealPoint Session::ideal() const {
    return {state_.t_min_reference, state_.c_min_reference.value_or(0.0)};
}

void Session::log(EventKind kind, std::vector<TaskId> tasks, std::vector<WorkerId> workers, double amount,
                  std::string detail) {
    SessionEvent event;
    event.seq = state_.log.size() + 1;
    event.kind = kind;
    event.clock = state_.clock;
    event.committed_cost = state_.committed_cost;
    event.tasks = std::move(tasks);
    event.workers = std::move(workers);
    event.amount = amount;
    event.detail = std::move(detail);
    event.free_workers = state_.free_workers.size();
    event.pool_size = state_.pool.size();
    std::size_t busy = 0;
    for (const auto& [id, run] : state_.running) busy += run.crew.size();
    event.busy_workers = busy;
    state_.log.push_back(std::move(event));
}

std::vector<Task> Session::ready_tasks() const {
    std::vector<Task> out;
    for (const auto& id : state_.ready) out.push_back(project_.tasks[task_index_.at(id)]);
    return out;
}

std::vector<Worker> Session::free_pool() const {
    std::vector<Worker> out;
    for (const auto& w : state_.pool)
        if (state_.free_workers.count(w.id)) out.push_back(w);
    return out;
}

const Worker& Session::pool_worker(const WorkerId& id) const {
    for (const auto& w : state_.pool)
        if (w.id == id) return w;
    throw InternalError("unknown worker '" + id + "' in session");
}

void Session::admit() {
    std::vector<TaskId> admitted;
    for (const auto& id : state_.pending) {
        const Task& task = project_.tasks[task_index_.at(id)];
        bool ready = std::all_of(task.predecessors.begin(), task.predecessors.end(), [&](const TaskId& p) {
            if (state_.completed.count(p)) return true;
            return config_.semantics == PrecedenceSemantics::StartToStart && state_.running.count(p) > 0;
        });
        if (ready) admitted.push_back(id);
    }
    for (const auto& id : admitted) {
        state_.pending.erase(id);
        state_.ready.insert(id);
    }
    if (!admitted.empty()) log(EventKind::TasksAdmitted, admitted);
}

void Session::staff_ready() {
    const auto tasks = ready_tasks();
    const auto free = free_pool();

    DecisionPrompt prompt;
    prompt.clock = state_.clock;
    prompt.running_empty = state_.running.empty();
    prompt.defer_delay_bound = std::numeric_limits<double>::infinity();
    for (const auto& t : tasks) {
        auto needs = staffing::demand(t);
        std::int64_t total = 0;
        for (auto n : needs) total += n;
        prompt.ready.push_back({t.id, t.duration, total});
        prompt.defer_delay_bound = std::min(prompt.defer_delay_bound, t.duration);
    }

    auto joint = staffing::solve_joint_staffing(tasks, free);
    if (!joint.feasible()) {
        std::string signature;
        for (const auto& id : state_.ready) signature += id + ",";
        signature += "|";
        for (const auto& id : state_.free_workers) signature += id + ",";
        if (!infeasible_signatures_.insert(signature).second) {
            prompt.kind = PromptCase::Infeasible;
            prompt.shortfalls = joint.shortfalls;
            state_.prompt = prompt;
            declare_stalemate("staffing still infeasible with the same ready tasks and free workers");
            return;
        }
        prompt.kind = PromptCase::Infeasible;
        prompt.shortfalls = joint.shortfalls;
        std::int64_t unmet = 0;
        for (const auto& s : joint.shortfalls) unmet += s.unmet;
        state_.prompt = prompt;
        state_.phase = Phase::AwaitingDecision;
        std::vector<TaskId> ids(state_.ready.begin(), state_.ready.end());
        log(EventKind::Prompted, ids, {}, static_cast<double>(unmet), to_string(prompt.kind));
        return;
    }

    // Each ready task's own minimum, against the whole pool.
    double baseline = 0.0;
    for (const auto& t : tasks) {
        auto own = staffing::solve_task_staffing(t, state_.pool);
        if (!own.feasible()) throw InternalError("task '" + t.id + "' staffable jointly but not alone");
        baseline += own.cost;
    }
    double overrun = joint.cost - baseline;
    if (overrun < 0.0 && overrun > -kEpsilon * std::max(1.0, joint.cost)) overrun = 0.0;

    if (overrun <= kEpsilon && !config_.prompt_on_zero_loss) {
        commit(joint.assignment, joint.cost);
        advance();
        return;
    }
    prompt.kind = PromptCase::CostOverrun;
    prompt.proposed = joint.assignment;
    prompt.proposed_cost = joint.cost;
    prompt.baseline_cost = baseline;
    prompt.overrun = overrun;
    state_.prompt = prompt;
    state_.phase = Phase::AwaitingDecision;
    std::vector<TaskId> ids(state_.ready.begin(), state_.ready.end());
    log(EventKind::Prompted, ids, {}, overrun, to_string(prompt.kind));
}

void Session::commit(const std::vector<staffing::Assignment>& crews, double cost) {
    std::vector<TaskId> ids(state_.ready.begin(), state_.ready.end());
    std::vector<WorkerId> hired;
    for (const auto& id : ids) {
        const Task& task = project_.tasks[task_index_.at(id)];
        RunningTask run;
        run.start = state_.clock;
        run.remaining = task.duration;
        for (const auto& cell : crews) {
            if (cell.task != id) continue;
            run.crew.push_back(cell);
            run.cost += pool_worker(cell.worker).rates[cell.work_type] * task.duration;
            if (state_.free_workers.erase(cell.worker) == 0)
                throw InternalError("worker '" + cell.worker + "' committed while busy");
            hired.push_back(cell.worker);
        }
        state_.running.emplace(id, std::move(run));
    }
    state_.ready.clear();
    state_.prompt = std::nullopt;
    state_.committed_cost += cost;
    state_.phase = Phase::Advancing;
    std::sort(hired.begin(), hired.end());
    log(EventKind::WaveCommitted, ids, hired, cost);
}

void Session::advance() {
    state_.phase = Phase::Advancing;
    if (state_.running.empty()) {
        if (state_.pending.empty() && state_.ready.empty()) {
            state_.phase = Phase::Completed;
            log(EventKind::SessionCompleted, {}, {}, state_.committed_cost);
            return;
        }
        if (state_.ready.empty())
            throw InternalError("no task can start and none is running");
        return;
    }

    double step = std::numeric_limits<double>::infinity();
    for (const auto& [id, run] : state_.running) step = std::min(step, run.remaining);
    state_.clock += step;
    infeasible_signatures_.clear();
    log(EventKind::ClockAdvanced, {}, {}, step);

    std::vector<TaskId> done;
    std::vector<WorkerId> released;
    for (auto it = state_.running.begin(); it != state_.running.end();) {
        it->second.remaining -= step;
        if (it->second.remaining > kEpsilon) {
            ++it;
            continue;
        }
        const RunningTask& run = it->second;
        for (const auto& cell : run.crew) {
            state_.free_workers.insert(cell.worker);
            released.push_back(cell.worker);
        }
        state_.finished.push_back({it->first, run.start, state_.clock, run.crew, run.cost});
        state_.completed.insert(it->first);
        done.push_back(it->first);
        it = state_.running.erase(it);
    }
    std::sort(released.begin(), released.end());
    log(EventKind::TasksCompleted, done, released);

    if (state_.running.empty() && state_.pending.empty() && state_.ready.empty()) {
        state_.phase = Phase::Completed;
        log(EventKind::SessionCompleted, {}, {}, state_.committed_cost);
    }
}

void Session::declare_stalemate(const std::string& reason) {
    StalemateReport report;
    report.reason = reason;
    report.clock = state_.clock;
    report.committed_cost = state_.committed_cost;
    report.last_prompt = state_.prompt;
    for (const auto& t : project_.tasks)
        if (!state_.completed.count(t.id)) report.unfinished.push_back(t.id);
    std::sort(report.unfinished.begin(), report.unfinished.end());
    state_.stalemate = std::move(report);
    state_.phase = Phase::Stalemate;
    log(EventKind::Stalemate, state_.stalemate->unfinished, {}, 0.0, reason);
}

SessionEvent Session::step() {
    if (state_.phase != Phase::Advancing)
        throw ProtocolError("step() needs an advancing session, phase is " + to_string(state_.phase));
    admit();
    if (!state_.ready.empty())
        staff_ready();
    else
        advance();
    return state_.log.back();
}

void Session::run_until_blocked() {
    while (state_.phase == Phase::Advancing) step();
}

void Session::apply_decision(const Decision& decision) {
    if (state_.phase != Phase::AwaitingDecision || !state_.prompt)
        throw ProtocolError("no decision is pending, phase is " + to_string(state_.phase));
    const DecisionPrompt prompt = *state_.prompt;

    if (const auto* add = std::get_if<AddWorkers>(&decision)) {
        if (prompt.kind != PromptCase::Infeasible)
            throw IllegalDecision("workers can only be added when staffing is infeasible");
        if (add->workers.empty()) throw IllegalDecision("add-workers needs at least one worker");
        std::set<WorkerId> ids;
        for (const auto& w : state_.pool) ids.insert(w.id);
        for (const auto& w : add->workers) {
            if (!ids.insert(w.id).second) throw IllegalDecision("worker id '" + w.id + "' already in the pool");
            if (w.skills.size() != project_.work_type_count() || w.rates.size() != project_.work_type_count())
                throw IllegalDecision("worker '" + w.id + "' has the wrong number of work types");
            if (std::any_of(w.rates.begin(), w.rates.end(), [](double c) { return !(c >= 0.0); }))
                throw IllegalDecision("worker '" + w.id + "' has a negative rate");
        }
    } else if (const auto* defer = std::get_if<DeferTasks>(&decision)) {
        if (defer->tasks.empty()) throw IllegalDecision("defer-tasks needs at least one task");
        for (const auto& id : defer->tasks)
            if (!state_.ready.count(id)) throw IllegalDecision("task '" + id + "' is not ready");
        if (!deferral_allowed(prompt, defer->tasks))
            throw IllegalDecision("cannot defer every ready task while nothing is running");
    } else if (prompt.kind != PromptCase::CostOverrun) {
        throw IllegalDecision("accept-cost only answers a cost-overrun prompt");
    }

    state_.trace.push_back({prompt, decision});
    state_.phase = Phase::Advancing;

    if (const auto* add = std::get_if<AddWorkers>(&decision)) {
        std::vector<WorkerId> ids;
        for (const auto& w : add->workers) {
            state_.pool.push_back(w);
            state_.free_workers.insert(w.id);
            ids.push_back(w.id);
        }
        state_.workers_added += add->workers.size();
        state_.prompt = std::nullopt;
        log(EventKind::DecisionApplied, {}, ids, 0.0, decision_kind(decision));
        staff_ready();
    } else if (const auto* defer = std::get_if<DeferTasks>(&decision)) {
        for (const auto& id : defer->tasks) {
            state_.ready.erase(id);
            state_.pending.insert(id);
        }
        state_.prompt = std::nullopt;
        log(EventKind::DecisionApplied, {defer->tasks.begin(), defer->tasks.end()}, {}, 0.0,
            decision_kind(decision));
        if (state_.ready.empty())
            advance();
        else
            staff_ready();
    } else {
        log(EventKind::DecisionApplied, {}, {}, prompt.proposed_cost, decision_kind(decision));
        commit(prompt.proposed, prompt.proposed_cost);
        advance();
    }
}

void Session::abstain(const std::string& reason) {
    if (state_.phase != Phase::AwaitingDecision)
        throw ProtocolError("nothing to abstain from, phase is " + to_string(state_.phase));
    declare_stalemate(reason.empty() ? "decision maker abstained" : reason);
}

DryRunResult Session::dry_run(const Decision& decision) const {
    Session copy = *this;
    copy.apply_decision(decision);
    copy.run_until_blocked();
    DryRunResult out;
    out.projected_t_delta = copy.state_.clock - state_.clock;
    out.projected_c_delta = copy.state_.committed_cost - state_.committed_cost;
    out.phase = copy.state_.phase;
    out.next_prompt = copy.state_.prompt;
    return out;
}

Plan Session::plan() const {
    if (state_.phase != Phase::Completed)
        throw ProtocolError("plan is only available once the session completed");
    Plan plan;
    plan.schedule = state_.finished;
    std::sort(plan.schedule.begin(), plan.schedule.end(), [](const ScheduledTask& a, const ScheduledTask& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.id < b.id;
    });
    for (const auto& s : plan.schedule) plan.hierarchy.ordering.push_back(s.id);
    plan.total_duration = state_.clock;
    plan.total_cost = state_.committed_cost;
    plan.trace = state_.trace;
    return plan;
}

namespace {

RunOutcome finish(const Session& session) {
    RunOutcome out;
    out.phase = session.state().phase;
    if (out.phase == Phase::Completed) out.plan = session.plan();
    out.stalemate = session.state().stalemate;
    out.final_state = session.state();
    return out;
}

}  // namespace

RunOutcome run_to_completion(const Project& project, const policy::Policy& policy, SessionConfig config) {
    Session session(project, config);
    session.run_until_blocked();
    while (session.state().phase == Phase::AwaitingDecision) {
        policy::StateSummary summary{session.state().clock, session.state().committed_cost, session.ideal()};
        auto answer = policy::decide(policy, *session.state().prompt, summary);
        if (!answer) {
            session.abstain("policy " + policy::to_string(policy) + " abstained");
            break;
        }
        try {
            session.apply_decision(*answer);
        } catch (const IllegalDecision& e) {
            session.abstain(std::string("policy answered illegally: ") + e.what());
            break;
        }
        session.run_until_blocked();
    }
    return finish(session);
}

RunOutcome replay(const Project& project, const std::vector<Decision>& decisions, SessionConfig config) {
    Session session(project, config);
    session.run_until_blocked();
    for (const auto& decision : decisions) {
        if (session.state().phase != Phase::AwaitingDecision) break;
        session.apply_decision(decision);
        session.run_until_blocked();
    }
    return finish(session);
}

}  // namespace plancraft::engine
