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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plancraft/error.hpp"

namespace plancraft {

using TaskId = std::string;
using WorkerId = std::string;

/// Absolute tolerance for every "is this zero" test on durations, volumes and costs.
inline constexpr double kEpsilon = 1e-9;

struct Task {
    TaskId id;
    std::set<TaskId> predecessors;
    std::vector<double> work;             // s_iq, one entry per work type, in work-time units
    std::vector<std::int64_t> resources;  // r_ik, one entry per resource type
    double duration = 0.0;
    std::optional<double> declared_cost;  // carried through, never used in cost arithmetic

    bool operator==(const Task&) const = default;
};

struct Worker {
    WorkerId id;
    std::vector<bool> skills;   // can perform work type q
    std::vector<double> rates;  // cost per unit time on work type q

    bool can_do(std::size_t q) const { return q < skills.size() && skills[q]; }

    bool operator==(const Worker&) const = default;
};

struct Project {
    std::vector<std::string> work_types;
    std::vector<std::string> resource_types;
    std::vector<Task> tasks;
    std::vector<Worker> workers;
    std::optional<double> budget;
    std::optional<double> deadline;

    std::size_t work_type_count() const { return work_types.size(); }
    const Task* find_task(const TaskId& id) const;
    const Worker* find_worker(const WorkerId& id) const;

    bool operator==(const Project&) const = default;
};

enum class ViolationKind {
    EmptyProject,
    NoWorkTypes,
    DuplicateId,
    DanglingPredecessor,
    SelfDependency,
    DependencyCycle,
    DimensionMismatch,
    NonPositiveDuration,
    NegativeValue,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string subject;  // offending task / worker id, empty for project-level issues
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
};

/// Thrown where a valid project is a precondition.
class ValidationError : public InvalidInput {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Collects every structural problem; never throws.
ValidationReport validate_project(const Project& project);

/// Throws ValidationError when validate_project finds anything.
void require_valid(const Project& project);

enum class PrecedenceSemantics {
    FinishToStart,  // ready once every predecessor has completed
    StartToStart,   // ready once every predecessor has at least started
};

std::string to_string(PrecedenceSemantics semantics);
PrecedenceSemantics parse_semantics(const std::string& text);

/// An ordering of all tasks in which each task's predecessors come earlier.
struct Hierarchy {
    std::vector<TaskId> ordering;

    bool operator==(const Hierarchy&) const = default;
};

/// True iff `hierarchy` lists every task exactly once with predecessors first.
/// Throws InvalidInput if it mentions a task the project does not have.
bool is_valid_hierarchy(const Hierarchy& hierarchy, const Project& project);

enum class Topology { StraightLine, Star, Tree, General };

std::string to_string(Topology topology);

/// Most specific shape of the dependency graph, checked in the order
/// StraightLine, Star, Tree, General.
Topology classify_topology(const Project& project);

}  // namespace plancraft
