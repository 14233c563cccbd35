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

#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "plancraft/model.hpp"

using namespace plancraft;
using namespace plancraft::testing;

TEST_CASE("validate_project: minimal instance is valid") {
    auto p = project({task("A1", 1.0, {1.0})});
    CHECK(validate_project(p).valid());
}

TEST_CASE("validate_project: two-cycle") {
    auto p = project({task("A1", 1.0, {1.0}, {"A2"}), task("A2", 1.0, {1.0}, {"A1"})});
    auto report = validate_project(p);
    CHECK_FALSE(report.valid());
    CHECK(report.has(ViolationKind::DependencyCycle));
}

TEST_CASE("validate_project: work vector length mismatch") {
    auto p = project({task("A1", 1.0, {1.0, 2.0})});
    p.work_types = {"S1", "S2", "S3"};
    CHECK(validate_project(p).has(ViolationKind::DimensionMismatch));
}

TEST_CASE("validate_project: reports every problem at once") {
    auto p = project({task("A1", 0.0, {1.0}, {"nope"}), task("A1", 1.0, {-1.0}, {"A1"})},
                     {worker("W1", {true}, {1.0}), worker("W1", {true, false}, {1.0})});
    auto report = validate_project(p);
    CHECK(report.has(ViolationKind::NonPositiveDuration));
    CHECK(report.has(ViolationKind::DanglingPredecessor));
    CHECK(report.has(ViolationKind::DuplicateId));
    CHECK(report.has(ViolationKind::SelfDependency));
    CHECK(report.has(ViolationKind::NegativeValue));
    CHECK(report.has(ViolationKind::DimensionMismatch));
    CHECK_THROWS_AS(require_valid(p), ValidationError);
}

TEST_CASE("validate_project: empty project and missing work types") {
    Project p;
    auto report = validate_project(p);
    CHECK(report.has(ViolationKind::EmptyProject));
    CHECK(report.has(ViolationKind::NoWorkTypes));
}

TEST_CASE("validate_project accepts exactly the acyclic projects (DFS oracle)") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 300; ++round) {
        oracle::GenOptions opt;
        opt.max_tasks = 7;
        auto p = oracle::random_project(rng, opt);
        // Sometimes add a back edge, which may or may not close a cycle.
        if (round % 2 == 0 && p.tasks.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, p.tasks.size() - 1);
            auto a = pick(rng), b = pick(rng);
            if (a != b) p.tasks[a].predecessors.insert(p.tasks[b].id);
        }
        CHECK(validate_project(p).valid() == !oracle::has_cycle(p));
    }
}

TEST_CASE("is_valid_hierarchy") {
    auto chain = project({task("A1", 1.0), task("A2", 1.0, {1.0}, {"A1"}), task("A3", 1.0, {1.0}, {"A2"})});
    CHECK(is_valid_hierarchy({{"A1", "A2", "A3"}}, chain));
    CHECK_FALSE(is_valid_hierarchy({{"A2", "A1", "A3"}}, chain));
    CHECK_FALSE(is_valid_hierarchy({{"A1", "A2"}}, chain));
    CHECK_FALSE(is_valid_hierarchy({{"A1", "A1", "A2"}}, chain));
    CHECK_THROWS_AS(is_valid_hierarchy({{"A1", "A9", "A3"}}, chain), InvalidInput);

    auto independent = project({task("A1", 1.0), task("A2", 1.0)});
    CHECK(is_valid_hierarchy({{"A2", "A1"}}, independent));
}

TEST_CASE("classify_topology") {
    auto chain = project({task("A1", 1.0), task("A2", 1.0, {1.0}, {"A1"}), task("A3", 1.0, {1.0}, {"A2"})});
    CHECK(classify_topology(chain) == Topology::StraightLine);

    auto star = project({task("A1", 1.0), task("A2", 1.0, {1.0}, {"A1"}), task("A3", 1.0, {1.0}, {"A1"}),
                         task("A4", 1.0, {1.0}, {"A1"})});
    CHECK(classify_topology(star) == Topology::Star);

    auto general = project({task("A1", 1.0), task("A2", 1.0, {1.0}, {"A1"}), task("A3", 1.0, {1.0}, {"A1"}),
                            task("A4", 1.0, {1.0}, {"A2", "A3"})});
    CHECK(classify_topology(general) == Topology::General);

    auto tree = project({task("A1", 1.0), task("A2", 1.0, {1.0}, {"A1"}), task("A3", 1.0, {1.0}, {"A1"}),
                         task("A4", 1.0, {1.0}, {"A3"})});
    CHECK(classify_topology(tree) == Topology::Tree);

    CHECK(classify_topology(project({task("A1", 1.0)})) == Topology::StraightLine);
    CHECK(classify_topology(project({task("A1", 1.0), task("A2", 1.0, {1.0}, {"A1"})})) == Topology::StraightLine);
    CHECK(classify_topology(project({task("A1", 1.0), task("A2", 1.0)})) == Topology::General);
}

TEST_CASE("classify_topology ignores input order") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 100; ++round) {
        oracle::GenOptions opt;
        opt.edge_probability = 0.3;
        opt.chain = round % 4 == 0;
        auto p = oracle::random_project(rng, opt);
        auto shuffled = p;
        std::shuffle(shuffled.tasks.begin(), shuffled.tasks.end(), rng);
        CHECK(classify_topology(p) == classify_topology(shuffled));
        if (opt.chain) CHECK(classify_topology(p) == Topology::StraightLine);
    }
}
