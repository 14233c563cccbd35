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

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "plancraft/model.hpp"
#include "plancraft/staffing.hpp"

namespace plancraft::engine {

enum class PromptCase {
    Infeasible,   // the ready tasks cannot all be staffed from the free workers
    CostOverrun,  // they can, but only above the sum of their individual minima
};

std::string to_string(PromptCase kind);

struct ReadyTask {
    TaskId id;
    double duration = 0.0;
    std::int64_t total_demand = 0;  // sum of chi over work types

    bool operator==(const ReadyTask&) const = default;
};

struct DecisionPrompt {
    PromptCase kind = PromptCase::Infeasible;
    double clock = 0.0;
    std::vector<ReadyTask> ready;  // sorted by id
    bool running_empty = true;

    // Infeasible
    std::vector<staffing::Shortfall> shortfalls;

    // CostOverrun
    std::vector<staffing::Assignment> proposed;
    double proposed_cost = 0.0;  // joint optimum over the ready set
    double baseline_cost = 0.0;  // sum of each ready task's own minimum
    double overrun = 0.0;        // proposed_cost - baseline_cost

    // Smallest duration in the ready set: deferring pushes the deferred work
    // back by at least this much.
    double defer_delay_bound = 0.0;

    bool operator==(const DecisionPrompt&) const = default;
};

/// Enlarge the worker pool and re-solve. Answers Infeasible only.
struct AddWorkers {
    std::vector<Worker> workers;
    bool operator==(const AddWorkers&) const = default;
};

/// Send some ready tasks back to the pending set for a later iteration.
struct DeferTasks {
    std::set<TaskId> tasks;
    bool operator==(const DeferTasks&) const = default;
};

/// Take the proposed crews at the proposed cost. Answers CostOverrun only.
struct AcceptCost {
    bool operator==(const AcceptCost&) const = default;
};

using Decision = std::variant<AddWorkers, DeferTasks, AcceptCost>;

std::string decision_kind(const Decision& decision);

/// Progress rule: with nothing running, at least one ready task must stay.
bool deferral_allowed(const DecisionPrompt& prompt, const std::set<TaskId>& tasks);

}  // namespace plancraft::engine
