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

#include "plancraft/model.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace plancraft {

const Task* Project::find_task(const TaskId& id) const {
    auto it = std::find_if(tasks.begin(), tasks.end(), [&](const Task& t) { return t.id == id; });
    return it == tasks.end() ? nullptr : &*it;
}

const Worker* Project::find_worker(const WorkerId& id) const {
    auto it = std::find_if(workers.begin(), workers.end(), [&](const Worker& w) { return w.id == id; });
    return it == workers.end() ? nullptr : &*it;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyProject: return "empty-project";
        case ViolationKind::NoWorkTypes: return "no-work-types";
        case ViolationKind::DuplicateId: return "duplicate-id";
        case ViolationKind::DanglingPredecessor: return "dangling-predecessor";
        case ViolationKind::SelfDependency: return "self-dependency";
        case ViolationKind::DependencyCycle: return "dependency-cycle";
        case ViolationKind::DimensionMismatch: return "dimension-mismatch";
        case ViolationKind::NonPositiveDuration: return "non-positive-duration";
        case ViolationKind::NegativeValue: return "negative-value";
    }
    return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

std::string summarize(const ValidationReport& report) {
    std::string text = "invalid project";
    for (const auto& v : report.violations) {
        text += "; " + to_string(v.kind);
        if (!v.subject.empty()) text += " (" + v.subject + ")";
    }
    return text;
}

// Kahn's algorithm restricted to edges whose endpoints exist. Returns the ids
// left over once no zero in-degree task remains, i.e. tasks on or behind a cycle.
std::vector<TaskId> tasks_on_cycles(const Project& project) {
    std::unordered_map<TaskId, int> indegree;
    std::unordered_map<TaskId, std::vector<TaskId>> successors;
    for (const auto& t : project.tasks) indegree.emplace(t.id, 0);
    for (const auto& t : project.tasks) {
        for (const auto& p : t.predecessors) {
            if (p == t.id || !indegree.count(p)) continue;
            ++indegree[t.id];
            successors[p].push_back(t.id);
        }
    }
    std::vector<TaskId> queue;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) queue.push_back(id);
    std::size_t removed = 0;
    while (!queue.empty()) {
        TaskId id = queue.back();
        queue.pop_back();
        ++removed;
        for (const auto& s : successors[id])
            if (--indegree[s] == 0) queue.push_back(s);
    }
    std::vector<TaskId> stuck;
    if (removed == indegree.size()) return stuck;
    for (const auto& [id, deg] : indegree)
        if (deg > 0) stuck.push_back(id);
    std::sort(stuck.begin(), stuck.end());
    return stuck;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : InvalidInput(summarize(report)), report_(std::move(report)) {}

ValidationReport validate_project(const Project& project) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::string subject, std::string message) {
        report.violations.push_back({kind, std::move(subject), std::move(message)});
    };

    const std::size_t q_count = project.work_types.size();
    const std::size_t k_count = project.resource_types.size();

    if (project.tasks.empty()) add(ViolationKind::EmptyProject, "", "project has no tasks");
    if (q_count == 0) add(ViolationKind::NoWorkTypes, "", "project declares no work types");
    if (project.budget && *project.budget < 0.0)
        add(ViolationKind::NegativeValue, "", "budget is negative");
    if (project.deadline && *project.deadline <= kEpsilon)
        add(ViolationKind::NonPositiveDuration, "", "deadline must be positive");

    std::set<TaskId> task_ids;
    for (const auto& t : project.tasks) {
        if (!task_ids.insert(t.id).second)
            add(ViolationKind::DuplicateId, t.id, "task id '" + t.id + "' used more than once");
    }
    for (const auto& t : project.tasks) {
        if (t.work.size() != q_count)
            add(ViolationKind::DimensionMismatch, t.id,
                "work vector has " + std::to_string(t.work.size()) + " entries, expected " +
                    std::to_string(q_count));
        if (t.resources.size() != k_count)
            add(ViolationKind::DimensionMismatch, t.id,
                "resource vector has " + std::to_string(t.resources.size()) + " entries, expected " +
                    std::to_string(k_count));
        if (!(t.duration > kEpsilon))
            add(ViolationKind::NonPositiveDuration, t.id, "duration must be positive");
        if (std::any_of(t.work.begin(), t.work.end(), [](double s) { return !(s >= 0.0); }) ||
            std::any_of(t.resources.begin(), t.resources.end(), [](std::int64_t r) { return r < 0; }) ||
            (t.declared_cost && !(*t.declared_cost >= 0.0)))
            add(ViolationKind::NegativeValue, t.id, "work, resource and cost entries must be non-negative");
        for (const auto& p : t.predecessors) {
            if (p == t.id)
                add(ViolationKind::SelfDependency, t.id, "task lists itself as a predecessor");
            else if (!task_ids.count(p))
                add(ViolationKind::DanglingPredecessor, t.id, "unknown predecessor '" + p + "'");
        }
    }

    std::set<WorkerId> worker_ids;
    for (const auto& w : project.workers) {
        if (!worker_ids.insert(w.id).second)
            add(ViolationKind::DuplicateId, w.id, "worker id '" + w.id + "' used more than once");
        if (w.skills.size() != q_count || w.rates.size() != q_count)
            add(ViolationKind::DimensionMismatch, w.id, "skill and rate vectors must have one entry per work type");
        if (std::any_of(w.rates.begin(), w.rates.end(), [](double c) { return !(c >= 0.0); }))
            add(ViolationKind::NegativeValue, w.id, "rates must be non-negative");
    }

    auto stuck = tasks_on_cycles(project);
    if (!stuck.empty()) {
        std::string ids;
        for (const auto& id : stuck) ids += (ids.empty() ? "" : ",") + id;
        add(ViolationKind::DependencyCycle, ids, "dependency cycle through or behind tasks " + ids);
    }
    return report;
}

void require_valid(const Project& project) {
    auto report = validate_project(project);
    if (!report.valid()) throw ValidationError(std::move(report));
}

std::string to_string(PrecedenceSemantics semantics) {
    return semantics == PrecedenceSemantics::FinishToStart ? "finish" : "start";
}

PrecedenceSemantics parse_semantics(const std::string& text) {
    if (text == "finish" || text == "finish-to-start") return PrecedenceSemantics::FinishToStart;
    if (text == "start" || text == "start-to-start") return PrecedenceSemantics::StartToStart;
    throw InvalidInput("unknown precedence semantics '" + text + "' (expected finish|start)");
}

bool is_valid_hierarchy(const Hierarchy& hierarchy, const Project& project) {
    std::unordered_map<TaskId, const Task*> by_id;
    for (const auto& t : project.tasks) by_id.emplace(t.id, &t);

    std::unordered_set<TaskId> placed;
    bool ok = hierarchy.ordering.size() == project.tasks.size();
    for (const auto& id : hierarchy.ordering) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw InvalidInput("ordering references unknown task '" + id + "'");
        if (!ok) continue;
        for (const auto& p : it->second->predecessors) {
            if (!placed.count(p)) {
                ok = false;
                break;
            }
        }
        if (!placed.insert(id).second) ok = false;
    }
    return ok;
}

std::string to_string(Topology topology) {
    switch (topology) {
        case Topology::StraightLine: return "straight-line";
        case Topology::Star: return "star";
        case Topology::Tree: return "tree";
        case Topology::General: return "general";
    }
    return "unknown";
}

Topology classify_topology(const Project& project) {
    std::map<TaskId, std::size_t> out_degree;
    for (const auto& t : project.tasks) out_degree.emplace(t.id, 0);
    for (const auto& t : project.tasks)
        for (const auto& p : t.predecessors) ++out_degree[p];

    std::vector<const Task*> roots;
    bool in_degree_le_one = true;
    for (const auto& t : project.tasks) {
        if (t.predecessors.empty()) roots.push_back(&t);
        if (t.predecessors.size() > 1) in_degree_le_one = false;
    }
    // Acyclic, one root, every other node with exactly one parent: an out-tree.
    if (roots.size() != 1 || !in_degree_le_one) return Topology::General;

    bool chain = std::all_of(out_degree.begin(), out_degree.end(),
                             [](const auto& entry) { return entry.second <= 1; });
    if (chain) return Topology::StraightLine;

    const TaskId& root = roots.front()->id;
    bool star = std::all_of(project.tasks.begin(), project.tasks.end(), [&](const Task& t) {
        return t.id == root || (t.predecessors.size() == 1 && *t.predecessors.begin() == root);
    });
    return star ? Topology::Star : Topology::Tree;
}

}  // namespace plancraft
