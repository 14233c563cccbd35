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
#include <span>
#include <vector>

#include "plancraft/model.hpp"

namespace plancraft::staffing {

/// Number of workers needed to get `volume` units of work done inside a task
/// lasting `duration`: ceil(volume / duration), with exact multiples (within
/// kEpsilon of remainder) not rounded up. Throws InvalidInput when
/// duration <= 0 or volume < 0.
std::int64_t chi(double volume, double duration);

/// chi for every work type of the task.
std::vector<std::int64_t> demand(const Task& task);

/// One cell x_jq = 1 (or y^i_jq = 1): `worker` does `work_type` on `task`.
struct Assignment {
    WorkerId worker;
    TaskId task;
    std::size_t work_type = 0;

    auto operator<=>(const Assignment&) const = default;
};

/// Unmet demand for one (task, work type) pair.
struct Shortfall {
    TaskId task;
    std::size_t work_type = 0;
    std::int64_t demand = 0;
    std::int64_t unmet = 0;

    bool operator==(const Shortfall&) const = default;
};

enum class Outcome { Infeasible, Optimal };

struct StaffingResult {
    Outcome outcome = Outcome::Infeasible;
    std::vector<Assignment> assignment;  // sorted by (worker, task, work type)
    double cost = 0.0;
    bool multiple_optima = false;
    std::vector<Shortfall> shortfalls;  // only when infeasible

    bool feasible() const { return outcome == Outcome::Optimal; }
};

/// Cheapest crew for a single task. Every worker takes at most one work type,
/// each work type gets exactly chi workers, only skilled workers are used,
/// and each crew member is paid rate * task duration. Among equal-cost crews
/// the lexicographically smallest sorted assignment list is returned.
StaffingResult solve_task_staffing(const Task& task, std::span<const Worker> workers);

/// Same problem for several tasks sharing one pool: a worker serves at most
/// one (task, work type) pair overall.
StaffingResult solve_joint_staffing(std::span<const Task> tasks, std::span<const Worker> workers);

/// Depth-first branch and bound over workers in id order. Exponential; meant
/// for small pools and for cross-checking the matching-based solver, which it
/// must agree with exactly (feasibility, cost, returned assignment).
StaffingResult solve_joint_staffing_branch_and_bound(std::span<const Task> tasks,
                                                     std::span<const Worker> workers);

struct ProjectMinCost {
    double total = 0.0;
    std::map<TaskId, double> per_task;  // feasible tasks only
    std::vector<Shortfall> shortfalls;  // every infeasible task's unmet pairs

    bool feasible() const { return shortfalls.empty(); }
    std::vector<TaskId> failing_tasks() const;
};

/// Each task staffed on its own against the whole pool, costs summed.
ProjectMinCost c_min_project(const Project& project);

struct IdealPoint {
    double t_star = 0.0;
    double c_star = 0.0;
};

/// Thrown by ideal_point when some task cannot be staffed at all.
class InfeasibleStaffing : public InvalidInput {
public:
    explicit InfeasibleStaffing(std::vector<Shortfall> shortfalls);
    const std::vector<Shortfall>& shortfalls() const { return shortfalls_; }

private:
    std::vector<Shortfall> shortfalls_;
};

/// (wave lower duration bound, minimum project cost).
IdealPoint ideal_point(const Project& project,
                       PrecedenceSemantics semantics = PrecedenceSemantics::FinishToStart);

}  // namespace plancraft::staffing
