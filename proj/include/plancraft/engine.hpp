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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plancraft/decision.hpp"
#include "plancraft/model.hpp"
#include "plancraft/policy.hpp"
#include "plancraft/staffing.hpp"

namespace plancraft::engine {

struct SessionConfig {
    PrecedenceSemantics semantics = PrecedenceSemantics::StartToStart;
    // Prompt even when the joint optimum costs nothing extra.
    bool prompt_on_zero_loss = false;

    bool operator==(const SessionConfig&) const = default;
};

enum class Phase { Advancing, AwaitingDecision, Completed, Stalemate };

std::string to_string(Phase phase);

enum class EventKind {
    SessionStarted,
    TasksAdmitted,
    Prompted,
    DecisionApplied,
    WaveCommitted,
    ClockAdvanced,
    TasksCompleted,
    SessionCompleted,
    Stalemate,
};

std::string to_string(EventKind kind);

/// One log entry. The three counters snapshot the worker pool after the
/// event: free + busy == pool_size always.
struct SessionEvent {
    std::uint64_t seq = 0;
    EventKind kind = EventKind::SessionStarted;
    double clock = 0.0;
    double committed_cost = 0.0;
    std::vector<TaskId> tasks;
    std::vector<WorkerId> workers;
    double amount = 0.0;  // prompt overrun, commit cost, or clock step
    std::string detail;
    std::size_t free_workers = 0;
    std::size_t busy_workers = 0;
    std::size_t pool_size = 0;

    bool operator==(const SessionEvent&) const = default;
};

struct RunningTask {
    double start = 0.0;
    double remaining = 0.0;
    double cost = 0.0;
    std::vector<staffing::Assignment> crew;

    bool operator==(const RunningTask&) const = default;
};

struct ScheduledTask {
    TaskId id;
    double start = 0.0;
    double finish = 0.0;
    std::vector<staffing::Assignment> crew;
    double cost = 0.0;

    bool operator==(const ScheduledTask&) const = default;
};

struct ConcessionStep {
    DecisionPrompt prompt;
    Decision decision;

    bool operator==(const ConcessionStep&) const = default;
};

struct Plan {
    Hierarchy hierarchy;                 // by start time, ties by id
    std::vector<ScheduledTask> schedule;  // same order as the hierarchy
    double total_duration = 0.0;
    double total_cost = 0.0;
    std::vector<ConcessionStep> trace;

    bool operator==(const Plan&) const = default;
};

struct StalemateReport {
    std::string reason;
    double clock = 0.0;
    double committed_cost = 0.0;
    std::vector<TaskId> unfinished;
    std::optional<DecisionPrompt> last_prompt;

    bool operator==(const StalemateReport&) const = default;
};

struct SessionState {
    double clock = 0.0;
    double committed_cost = 0.0;
    std::set<TaskId> pending;
    std::set<TaskId> ready;
    std::map<TaskId, RunningTask> running;
    std::set<TaskId> completed;
    std::set<WorkerId> free_workers;
    std::vector<Worker> pool;  // project workers followed by any added ones
    std::size_t workers_added = 0;
    Phase phase = Phase::Advancing;
    std::optional<DecisionPrompt> prompt;
    std::vector<SessionEvent> log;
    std::vector<ScheduledTask> finished;  // in completion order
    std::vector<ConcessionStep> trace;
    std::optional<StalemateReport> stalemate;

    // Reference values computed once at start: the wave duration bound and
    // the sum of per-task minimum costs (absent if some task cannot be staffed).
    double t_min_reference = 0.0;
    std::optional<double> c_min_reference;

    bool operator==(const SessionState&) const = default;
};

struct DryRunResult {
    double projected_t_delta = 0.0;
    double projected_c_delta = 0.0;
    Phase phase = Phase::Advancing;
    std::optional<DecisionPrompt> next_prompt;
};

/// The sequential-concessions state machine. Single writer: step,
/// apply_decision and abstain must not race on one instance. Copies are
/// independent.
class Session {
public:
    /// Throws ValidationError for an invalid project.
    explicit Session(Project project, SessionConfig config = {});

    const SessionState& state() const { return state_; }
    const Project& project() const { return project_; }
    const SessionConfig& config() const { return config_; }
    std::uint64_t decisions_applied() const { return state_.trace.size(); }
    staffing::IdealPoint ideal() const;

    /// One iteration: admit ready tasks, staff them (or prompt), and advance
    /// the clock to the next completion. Returns the last event written.
    /// Throws ProtocolError unless the phase is Advancing.
    SessionEvent step();

    /// Steps until a prompt or a terminal phase.
    void run_until_blocked();

    /// Throws ProtocolError when no prompt is pending and IllegalDecision when
    /// the decision does not fit it; the state is untouched in both cases.
    void apply_decision(const Decision& decision);

    /// Gives up on the pending prompt; the session ends in Stalemate.
    void abstain(const std::string& reason);

    /// apply_decision followed by run_until_blocked, on a copy.
    DryRunResult dry_run(const Decision& decision) const;

    /// Throws ProtocolError unless Completed.
    Plan plan() const;

private:
    void log(EventKind kind, std::vector<TaskId> tasks = {}, std::vector<WorkerId> workers = {},
             double amount = 0.0, std::string detail = {});
    void admit();
    void staff_ready();
    void commit(const std::vector<staffing::Assignment>& crews, double cost);
    void advance();
    void declare_stalemate(const std::string& reason);
    std::vector<Task> ready_tasks() const;
    std::vector<Worker> free_pool() const;
    const Worker& pool_worker(const WorkerId& id) const;

    Project project_;
    SessionConfig config_;
    SessionState state_;
    std::map<TaskId, std::size_t> task_index_;
    std::set<std::string> infeasible_signatures_;
};

struct RunOutcome {
    Phase phase = Phase::Completed;
    std::optional<Plan> plan;
    std::optional<StalemateReport> stalemate;
    SessionState final_state;
};

/// Drives a session with policy answers until it completes or stalls.
RunOutcome run_to_completion(const Project& project, const policy::Policy& policy,
                             SessionConfig config = {});

/// Feeds recorded decisions back through a fresh session, in order.
RunOutcome replay(const Project& project, const std::vector<Decision>& decisions, SessionConfig config = {});

}  // namespace plancraft::engine
