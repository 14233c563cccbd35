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

#include "plancraft/staffing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "min_cost_flow.hpp"
#include "plancraft/bounds.hpp"

namespace plancraft::staffing {

std::int64_t chi(double volume, double duration) {
    if (!(duration > 0.0)) throw InvalidInput("chi: duration must be positive");
    if (!(volume >= 0.0)) throw InvalidInput("chi: work volume must be non-negative");
    const double whole = std::floor(volume / duration);
    const double remainder = volume - whole * duration;
    auto count = static_cast<std::int64_t>(whole);
    if (std::abs(remainder) <= kEpsilon) return count;
    // floor(volume / duration) can land one below an exact multiple.
    if (std::abs(remainder - duration) <= kEpsilon) return count + 1;
    return remainder > 0.0 ? count + 1 : count;
}

std::vector<std::int64_t> demand(const Task& task) {
    std::vector<std::int64_t> out;
    out.reserve(task.work.size());
    for (double s : task.work) out.push_back(chi(s, task.duration));
    return out;
}

std::vector<TaskId> ProjectMinCost::failing_tasks() const {
    std::set<TaskId> ids;
    for (const auto& s : shortfalls) ids.insert(s.task);
    return {ids.begin(), ids.end()};
}

InfeasibleStaffing::InfeasibleStaffing(std::vector<Shortfall> shortfalls)
    : InvalidInput("not enough workers to staff every task"), shortfalls_(std::move(shortfalls)) {}

namespace {

double tolerance_for(double cost) { return kEpsilon * std::max(1.0, std::abs(cost)); }

// The staffing instance in canonical order: workers by id, groups by (task id, work type).
struct Instance {
    struct Group {
        TaskId task;
        std::size_t work_type;
        std::int64_t demand;
        std::vector<std::optional<double>> cost;  // per worker, in sorted worker order
    };
    std::vector<const Worker*> workers;
    std::vector<Group> groups;
};

Instance build_instance(std::span<const Task> tasks, std::span<const Worker> workers) {
    Instance inst;
    std::set<WorkerId> seen_workers;
    for (const auto& w : workers) {
        if (!seen_workers.insert(w.id).second) throw InvalidInput("duplicate worker id '" + w.id + "'");
        inst.workers.push_back(&w);
    }
    std::sort(inst.workers.begin(), inst.workers.end(),
              [](const Worker* a, const Worker* b) { return a->id < b->id; });

    std::vector<const Task*> sorted_tasks;
    std::set<TaskId> seen_tasks;
    for (const auto& t : tasks) {
        if (!seen_tasks.insert(t.id).second) throw InvalidInput("duplicate task id '" + t.id + "'");
        sorted_tasks.push_back(&t);
    }
    std::sort(sorted_tasks.begin(), sorted_tasks.end(),
              [](const Task* a, const Task* b) { return a->id < b->id; });

    for (const Task* task : sorted_tasks) {
        const std::size_t q_count = task->work.size();
        for (const Worker* w : inst.workers) {
            if (w->skills.size() != q_count || w->rates.size() != q_count)
                throw InvalidInput("worker '" + w->id + "' and task '" + task->id +
                                   "' disagree on the number of work types");
        }
        auto needs = demand(*task);
        for (std::size_t q = 0; q < q_count; ++q) {
            if (needs[q] == 0) continue;
            Instance::Group group{task->id, q, needs[q], {}};
            for (const Worker* w : inst.workers) {
                if (w->can_do(q))
                    group.cost.emplace_back(w->rates[q] * task->duration);
                else
                    group.cost.emplace_back(std::nullopt);
            }
            inst.groups.push_back(std::move(group));
        }
    }
    return inst;
}

std::vector<detail::SlotGroup> to_slot_groups(const Instance& inst) {
    std::vector<detail::SlotGroup> out;
    out.reserve(inst.groups.size());
    for (const auto& g : inst.groups) out.push_back({g.demand, g.cost});
    return out;
}

std::vector<Shortfall> shortfalls_of(const Instance& inst, const detail::FlowResult& flow) {
    std::vector<Shortfall> out;
    for (std::size_t g = 0; g < inst.groups.size(); ++g) {
        if (flow.unmet[g] > 0)
            out.push_back({inst.groups[g].task, inst.groups[g].work_type, inst.groups[g].demand, flow.unmet[g]});
    }
    return out;
}

// Builds the sorted entry list and its cost, summed in entry order.
StaffingResult make_result(const Instance& inst, const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
    StaffingResult result;
    result.outcome = Outcome::Optimal;
    std::vector<std::pair<std::size_t, std::size_t>> ordered = cells;
    std::sort(ordered.begin(), ordered.end());  // worker index, then group index: matches id order
    for (auto [w, g] : ordered) {
        result.assignment.push_back({inst.workers[w]->id, inst.groups[g].task, inst.groups[g].work_type});
        result.cost += *inst.groups[g].cost[w];
    }
    return result;
}

}  // namespace

StaffingResult solve_joint_staffing(std::span<const Task> tasks, std::span<const Worker> workers) {
    const Instance inst = build_instance(tasks, workers);
    const std::size_t worker_count = inst.workers.size();
    auto base = to_slot_groups(inst);

    const auto best = detail::min_cost_assignment(base, worker_count);
    if (!best.complete) {
        StaffingResult result;
        result.shortfalls = shortfalls_of(inst, best);
        return result;
    }
    const double optimum = best.cost;
    const double tol = tolerance_for(optimum);

    std::int64_t total_demand = 0;
    for (const auto& g : base) total_demand += g.demand;

    // Greedy over cells in (worker, group) order: keep a cell whenever some
    // optimal assignment still contains it together with everything kept so
    // far and nothing ruled out. This yields the lexicographically smallest
    // optimal entry list.
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    std::vector<bool> worker_used(worker_count, false);
    double kept_cost = 0.0;
    auto working = base;
    for (std::size_t w = 0; w < worker_count && static_cast<std::int64_t>(kept.size()) < total_demand; ++w) {
        for (std::size_t g = 0; g < working.size(); ++g) {
            if (!working[g].cost[w] || working[g].demand == 0) continue;
            auto trial = working;
            const double price = *trial[g].cost[w];
            trial[g].demand -= 1;
            for (auto& group : trial) group.cost[w] = std::nullopt;
            auto rest = detail::min_cost_assignment(trial, worker_count);
            if (rest.complete && kept_cost + price + rest.cost <= optimum + tol) {
                kept.emplace_back(w, g);
                kept_cost += price;
                worker_used[w] = true;
                working = std::move(trial);
                break;
            }
            working[g].cost[w] = std::nullopt;
        }
        if (!worker_used[w])
            for (auto& group : working) group.cost[w] = std::nullopt;
    }
    if (static_cast<std::int64_t>(kept.size()) != total_demand)
        throw InternalError("tie-breaking pass lost the optimum");

    StaffingResult result = make_result(inst, kept);

    // Another optimum exists iff dropping one chosen cell still reaches the optimum.
    for (auto [w, g] : kept) {
        auto trial = base;
        trial[g].cost[w] = std::nullopt;
        auto alt = detail::min_cost_assignment(trial, worker_count);
        if (alt.complete && alt.cost <= optimum + tol) {
            result.multiple_optima = true;
            break;
        }
    }
    return result;
}

StaffingResult solve_task_staffing(const Task& task, std::span<const Worker> workers) {
    return solve_joint_staffing(std::span<const Task>(&task, 1), workers);
}

namespace {

class BranchAndBound {
public:
    explicit BranchAndBound(const Instance& inst) : inst_(inst) {
        remaining_.reserve(inst.groups.size());
        for (const auto& g : inst.groups) remaining_.push_back(g.demand);
        choice_.assign(inst.workers.size(), -1);
    }

    void run() { descend(0, 0.0); }

    bool found() const { return found_; }
    double best_cost() const { return best_cost_; }
    const std::vector<int>& best_choice() const { return best_choice_; }
    int optimum_count() const { return optimum_count_; }

private:
    // Cheapest way to fill what is left from workers `from` onward, ignoring
    // that one worker may not serve two groups. +inf when some group cannot fill.
    double lower_bound(std::size_t from) const {
        double bound = 0.0;
        for (std::size_t g = 0; g < inst_.groups.size(); ++g) {
            if (remaining_[g] == 0) continue;
            std::vector<double> prices;
            for (std::size_t w = from; w < inst_.workers.size(); ++w)
                if (inst_.groups[g].cost[w]) prices.push_back(*inst_.groups[g].cost[w]);
            if (static_cast<std::int64_t>(prices.size()) < remaining_[g])
                return std::numeric_limits<double>::infinity();
            std::partial_sort(prices.begin(), prices.begin() + remaining_[g], prices.end());
            bound += std::accumulate(prices.begin(), prices.begin() + remaining_[g], 0.0);
        }
        return bound;
    }

    void descend(std::size_t w, double cost) {
        std::int64_t open = std::accumulate(remaining_.begin(), remaining_.end(), std::int64_t{0});
        if (open == 0) {
            record(cost);
            return;
        }
        if (w == inst_.workers.size()) return;
        if (open > static_cast<std::int64_t>(inst_.workers.size() - w)) return;
        const double bound = cost + lower_bound(w);
        if (!std::isfinite(bound)) return;
        if (found_ && bound > best_cost_ + tolerance_for(best_cost_)) return;

        for (std::size_t g = 0; g < inst_.groups.size(); ++g) {
            if (remaining_[g] == 0 || !inst_.groups[g].cost[w]) continue;
            --remaining_[g];
            choice_[w] = static_cast<int>(g);
            descend(w + 1, cost + *inst_.groups[g].cost[w]);
            choice_[w] = -1;
            ++remaining_[g];
        }
        descend(w + 1, cost);
    }

    void record(double cost) {
        if (!found_ || cost < best_cost_ - tolerance_for(best_cost_)) {
            found_ = true;
            best_cost_ = cost;
            best_choice_ = choice_;
            optimum_count_ = 1;
        } else if (cost <= best_cost_ + tolerance_for(best_cost_)) {
            ++optimum_count_;
        }
    }

    const Instance& inst_;
    std::vector<std::int64_t> remaining_;
    std::vector<int> choice_;
    bool found_ = false;
    double best_cost_ = 0.0;
    std::vector<int> best_choice_;
    int optimum_count_ = 0;
};

}  // namespace

StaffingResult solve_joint_staffing_branch_and_bound(std::span<const Task> tasks,
                                                     std::span<const Worker> workers) {
    const Instance inst = build_instance(tasks, workers);
    BranchAndBound search(inst);
    search.run();
    if (!search.found()) {
        // Report shortfalls the same way the matching solver does.
        auto flow = detail::min_cost_assignment(to_slot_groups(inst), inst.workers.size());
        StaffingResult result;
        result.shortfalls = shortfalls_of(inst, flow);
        return result;
    }
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t w = 0; w < search.best_choice().size(); ++w)
        if (search.best_choice()[w] >= 0) cells.emplace_back(w, static_cast<std::size_t>(search.best_choice()[w]));
    StaffingResult result = make_result(inst, cells);
    result.multiple_optima = search.optimum_count() > 1;
    return result;
}

ProjectMinCost c_min_project(const Project& project) {
    require_valid(project);
    ProjectMinCost out;
    for (const auto& task : project.tasks) {
        auto result = solve_task_staffing(task, project.workers);
        if (result.feasible()) {
            out.per_task[task.id] = result.cost;
            out.total += result.cost;
        } else {
            out.shortfalls.insert(out.shortfalls.end(), result.shortfalls.begin(), result.shortfalls.end());
        }
    }
    return out;
}

IdealPoint ideal_point(const Project& project, PrecedenceSemantics semantics) {
    auto cost = c_min_project(project);
    if (!cost.feasible()) throw InfeasibleStaffing(cost.shortfalls);
    return {bounds::t_min_wave(project, semantics).total_duration, cost.total};
}

}  // namespace plancraft::staffing
