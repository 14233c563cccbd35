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
#include "plancraft/bounds.hpp"
#include "plancraft/engine.hpp"

using namespace plancraft;
using namespace plancraft::engine;
using namespace plancraft::testing;
using doctest::Approx;

namespace {

Project pigeonhole() {
    return project({task("A1", 2.0, {4.0}), task("A2", 3.0, {6.0})},
                   {worker("W1", {true}, {1.0}), worker("W2", {true}, {1.0}), worker("W3", {true}, {1.0})});
}

Project cheap_and_dear() {
    return project({task("A1", 2.0, {2.0}), task("A2", 2.0, {2.0})},
                   {worker("W1", {true}, {1.0}), worker("W2", {true}, {10.0})});
}

void check_conservation(const SessionState& s) {
    for (const auto& e : s.log) CHECK(e.free_workers + e.busy_workers == e.pool_size);
    std::size_t busy = 0;
    for (const auto& [id, run] : s.running)
        for (const auto& c : run.crew) {
            CHECK(s.free_workers.count(c.worker) == 0);
            ++busy;
        }
    CHECK(s.free_workers.size() + busy == s.pool.size());
}

}  // namespace

TEST_CASE("session start") {
    Session s(pigeonhole());
    CHECK(s.state().pending.size() == 2);
    CHECK(s.state().free_workers.size() == 3);
    CHECK(s.state().clock == 0.0);
    CHECK(s.state().phase == Phase::Advancing);
    CHECK(s.config().semantics == PrecedenceSemantics::StartToStart);

    auto bad = project({task("A1", 1.0, {1.0}, {"A2"}), task("A2", 1.0, {1.0}, {"A1"})});
    CHECK_THROWS_AS(Session{bad}, ValidationError);
}

TEST_CASE("no workers at all: the first step prompts Case 1") {
    Session s(project({task("A1", 1.0, {1.0})}));
    auto ev = s.step();
    CHECK(ev.kind == EventKind::Prompted);
    REQUIRE(s.state().prompt);
    CHECK(s.state().prompt->kind == PromptCase::Infeasible);
}

TEST_CASE("a lone root is admitted by the first step") {
    Session s(project({task("A1", 1.0, {1.0})}, {worker("W1", {true}, {1.0})}));
    s.step();
    CHECK(s.state().log[1].kind == EventKind::TasksAdmitted);
    CHECK(s.state().log[1].tasks == std::vector<TaskId>{"A1"});
}

TEST_CASE("chain with ample workers commits without prompts") {
    auto p = project({task("A1", 2.0, {2.0}), task("A2", 3.0, {3.0}, {"A1"})},
                     {worker("W1", {true}, {2.0}), worker("W2", {true}, {2.0})});
    Session s(p);
    s.run_until_blocked();
    REQUIRE(s.state().phase == Phase::Completed);
    int commits = 0;
    for (const auto& e : s.state().log) commits += e.kind == EventKind::WaveCommitted;
    CHECK(commits == 2);
    auto plan = s.plan();
    CHECK(plan.total_duration == 5.0);
    CHECK(plan.total_cost == Approx(10.0));
    CHECK(plan.trace.empty());
    CHECK(plan.hierarchy.ordering == std::vector<TaskId>{"A1", "A2"});
}

TEST_CASE("pigeonhole prompts Case 1 with shortfall 1") {
    Session s(pigeonhole());
    s.run_until_blocked();
    REQUIRE(s.state().phase == Phase::AwaitingDecision);
    const auto& prompt = *s.state().prompt;
    CHECK(prompt.kind == PromptCase::Infeasible);
    std::int64_t unmet = 0;
    for (const auto& sf : prompt.shortfalls) unmet += sf.unmet;
    CHECK(unmet == 1);
    CHECK(prompt.defer_delay_bound == 2.0);
    CHECK(prompt.running_empty);
    CHECK_THROWS_AS(s.step(), ProtocolError);
}

TEST_CASE("shared cheap worker prompts Case 2") {
    Session s(cheap_and_dear());
    s.run_until_blocked();
    REQUIRE(s.state().phase == Phase::AwaitingDecision);
    const auto& prompt = *s.state().prompt;
    CHECK(prompt.kind == PromptCase::CostOverrun);
    CHECK(prompt.proposed_cost == Approx(22.0));
    CHECK(prompt.baseline_cost == Approx(4.0));
    CHECK(prompt.overrun == Approx(18.0));
}

TEST_CASE("AddWorkers restores feasibility") {
    Session s(pigeonhole());
    s.run_until_blocked();
    s.apply_decision(AddWorkers{{worker("W4", {true}, {1.0})}});
    s.run_until_blocked();
    REQUIRE(s.state().phase == Phase::Completed);
    CHECK(s.state().workers_added == 1);
    auto plan = s.plan();
    CHECK(plan.schedule[0].start == 0.0);
    CHECK(plan.schedule[1].start == 0.0);
    CHECK(plan.total_duration == 3.0);
    check_conservation(s.state());
}

TEST_CASE("DeferTasks delays the deferred task by at least the bound") {
    Session base(pigeonhole());
    base.run_until_blocked();
    base.apply_decision(AddWorkers{{worker("W4", {true}, {1.0})}});
    base.run_until_blocked();
    double t_base = base.state().clock;

    Session s(pigeonhole());
    s.run_until_blocked();
    double bound = s.state().prompt->defer_delay_bound;
    auto projected = s.dry_run(DeferTasks{{"A2"}});
    s.apply_decision(DeferTasks{{"A2"}});
    s.run_until_blocked();
    REQUIRE(s.state().phase == Phase::Completed);
    auto plan = s.plan();
    CHECK(plan.schedule[1].id == "A2");
    CHECK(plan.schedule[1].start >= bound - 1e-9);
    CHECK(plan.total_duration - t_base >= bound - 1e-9);
    CHECK(projected.projected_t_delta >= bound - 1e-9);
    CHECK(projected.projected_t_delta == Approx(plan.total_duration));
}

TEST_CASE("AcceptCost adds exactly the proposed cost") {
    Session s(cheap_and_dear());
    s.run_until_blocked();
    double before = s.state().committed_cost;
    double proposed = s.state().prompt->proposed_cost;
    s.apply_decision(AcceptCost{});
    CHECK(s.state().committed_cost == before + proposed);
}

TEST_CASE("illegal decisions leave the state untouched") {
    Session s(pigeonhole());
    s.run_until_blocked();
    auto snapshot = s.state();
    CHECK_THROWS_AS(s.apply_decision(AcceptCost{}), IllegalDecision);
    CHECK_THROWS_AS(s.apply_decision(DeferTasks{{"A1", "A2"}}), IllegalDecision);
    CHECK_THROWS_AS(s.apply_decision(DeferTasks{{"A9"}}), IllegalDecision);
    CHECK_THROWS_AS(s.apply_decision(DeferTasks{}), IllegalDecision);
    CHECK_THROWS_AS(s.apply_decision(AddWorkers{{worker("W1", {true}, {1.0})}}), IllegalDecision);
    CHECK_THROWS_AS(s.apply_decision(AddWorkers{{worker("W7", {true, true}, {1.0, 1.0})}}), IllegalDecision);
    CHECK(s.state() == snapshot);

    Session c(cheap_and_dear());
    c.run_until_blocked();
    CHECK_THROWS_AS(c.apply_decision(AddWorkers{{worker("W9", {true}, {1.0})}}), IllegalDecision);

    Session done(project({task("A1", 1.0, {1.0})}, {worker("W1", {true}, {1.0})}));
    done.run_until_blocked();
    CHECK_THROWS_AS(done.apply_decision(AcceptCost{}), ProtocolError);
    CHECK_THROWS_AS(Session(pigeonhole()).plan(), ProtocolError);
}

TEST_CASE("dry_run matches apply and leaves the session alone") {
    Session s(cheap_and_dear());
    s.run_until_blocked();
    auto snapshot = s.state();
    auto projected = s.dry_run(AcceptCost{});
    CHECK(s.state() == snapshot);
    double t0 = s.state().clock, c0 = s.state().committed_cost;
    s.apply_decision(AcceptCost{});
    s.run_until_blocked();
    CHECK(projected.projected_t_delta == s.state().clock - t0);
    CHECK(projected.projected_c_delta == s.state().committed_cost - c0);
    CHECK(projected.phase == s.state().phase);
}

TEST_CASE("abstain ends in stalemate") {
    Session s(pigeonhole());
    s.run_until_blocked();
    s.abstain("");
    CHECK(s.state().phase == Phase::Stalemate);
    REQUIRE(s.state().stalemate);
    CHECK(s.state().stalemate->unfinished == std::vector<TaskId>{"A1", "A2"});
    CHECK_THROWS_AS(s.abstain("again"), ProtocolError);
}

TEST_CASE("run_to_completion: straight line reaches the ideal point") {
    auto p = project({task("A1", 3.0, {3.0}), task("A2", 5.0, {10.0}, {"A1"}), task("A3", 2.0, {1.0}, {"A2"})},
                     {worker("W1", {true}, {4.0}), worker("W2", {true}, {1.0}), worker("W3", {true}, {2.0})});
    auto out = run_to_completion(p, policy::Policy::always_accept());
    REQUIRE(out.phase == Phase::Completed);
    CHECK(out.plan->total_duration == bounds::t_max(p));
    CHECK(out.plan->total_duration == bounds::t_min_wave(p).total_duration);
    CHECK(out.plan->total_cost == Approx(staffing::c_min_project(p).total));
    CHECK(out.plan->trace.empty());
}

TEST_CASE("run_to_completion: unstaffable project stalls") {
    auto p = project({task("A1", 2.0, {4.0})}, {worker("W1", {true}, {1.0})});
    auto out = run_to_completion(p, policy::Policy::always_accept());
    CHECK(out.phase == Phase::Stalemate);
    REQUIRE(out.stalemate);
    CHECK(out.stalemate->unfinished == std::vector<TaskId>{"A1"});
    REQUIRE(out.stalemate->last_prompt);
    CHECK(out.stalemate->last_prompt->kind == PromptCase::Infeasible);
}

TEST_CASE("run_to_completion: scarce workers push T past the wave bound") {
    // Root, then three parallel tasks that cannot all be staffed at once.
    auto p = project({task("A1", 1.0, {1.0}), task("A2", 2.0, {2.0}, {"A1"}), task("A3", 2.0, {2.0}, {"A1"}),
                      task("A4", 2.0, {4.0}, {"A1"})},
                     {worker("W1", {true}, {1.0}), worker("W2", {true}, {1.0})});
    auto out = run_to_completion(p, policy::Policy::always_accept(), {PrecedenceSemantics::FinishToStart});
    REQUIRE(out.phase == Phase::Completed);
    CHECK(out.plan->total_duration > bounds::t_min_wave(p).total_duration);
    CHECK_FALSE(out.plan->trace.empty());
    CHECK(is_valid_hierarchy(out.plan->hierarchy, p));
}

TEST_CASE("start-to-start admits successors of running tasks") {
    // A0 finishes first; the clock advance then admits A2 while A1 still runs.
    auto q = project({task("A0", 1.0, {1.0}), task("A1", 4.0, {4.0}), task("A2", 1.0, {1.0}, {"A1"})},
                     {worker("W1", {true}, {1.0}), worker("W2", {true}, {1.0})});
    auto out = run_to_completion(q, policy::Policy::always_accept());
    REQUIRE(out.phase == Phase::Completed);
    CHECK(out.plan->total_duration == 4.0);
    auto fts = run_to_completion(q, policy::Policy::always_accept(), {PrecedenceSemantics::FinishToStart});
    REQUIRE(fts.phase == Phase::Completed);
    CHECK(fts.plan->total_duration == 5.0);
}

TEST_CASE("engine can finish below the wave bound under finish-to-start") {
    auto p = project({task("A1", 1.0, {1.0}), task("A2", 5.0, {5.0}, {"A1"}), task("A3", 1.0, {1.0}, {"A1"}),
                      task("A4", 3.0, {3.0}, {"A3"})},
                     {worker("W1", {true}, {1.0}), worker("W2", {true}, {1.0})});
    auto out = run_to_completion(p, policy::Policy::always_accept(), {PrecedenceSemantics::FinishToStart});
    REQUIRE(out.phase == Phase::Completed);
    CHECK(bounds::t_min_wave(p).total_duration == 9.0);
    CHECK(out.plan->total_duration == 6.0);
    CHECK(out.plan->total_duration >= bounds::critical_path_length(p));
}

TEST_CASE("prompt_on_zero_loss asks even for free waves") {
    auto p = project({task("A1", 1.0, {1.0})}, {worker("W1", {true}, {1.0})});
    Session s(p, {PrecedenceSemantics::StartToStart, true});
    s.run_until_blocked();
    REQUIRE(s.state().phase == Phase::AwaitingDecision);
    CHECK(s.state().prompt->overrun == 0.0);
    s.apply_decision(AcceptCost{});
    s.run_until_blocked();
    CHECK(s.state().phase == Phase::Completed);
}

TEST_CASE("random sessions: ledger, conservation, hierarchy, replay") {
    std::mt19937_64 rng(555);
    for (int round = 0; round < 60; ++round) {
        oracle::GenOptions opt;
        opt.max_tasks = 7;
        opt.max_workers = 4;
        auto p = oracle::random_project(rng, opt);
        oracle::make_staffable(rng, p);
        auto semantics = round % 2 ? PrecedenceSemantics::FinishToStart : PrecedenceSemantics::StartToStart;
        Session s(p, {semantics});
        s.run_until_blocked();
        std::vector<Decision> decisions;
        while (s.state().phase == Phase::AwaitingDecision) {
            const auto& prompt = *s.state().prompt;
            if (prompt.kind == PromptCase::CostOverrun) CHECK(prompt.overrun >= 0.0);
            Decision d = AcceptCost{};
            auto deferral = policy::defer_largest(prompt);
            if (prompt.kind == PromptCase::Infeasible || (rng() % 3 == 0 && deferral)) {
                if (!deferral) break;
                d = *deferral;
            }
            decisions.push_back(d);
            s.apply_decision(d);
            s.run_until_blocked();
        }
        check_conservation(s.state());
        for (std::size_t i = 1; i < s.state().log.size(); ++i) {
            CHECK(s.state().log[i].clock >= s.state().log[i - 1].clock);
            CHECK(s.state().log[i].committed_cost >= s.state().log[i - 1].committed_cost);
        }
        if (s.state().phase != Phase::Completed) continue;
        auto plan = s.plan();
        CHECK(is_valid_hierarchy(plan.hierarchy, p));
        CHECK(plan.total_cost >= *s.state().c_min_reference - 1e-9);
        double ledger = 0.0;
        for (const auto& t : plan.schedule) {
            double crew_cost = 0.0;
            for (const auto& c : t.crew) crew_cost += p.find_worker(c.worker)->rates[c.work_type] * (t.finish - t.start);
            CHECK(crew_cost == Approx(t.cost));
            ledger += t.cost;
        }
        CHECK(ledger == Approx(plan.total_cost));
        if (semantics == PrecedenceSemantics::FinishToStart)
            CHECK(plan.total_duration >= oracle::longest_path(p) - 1e-9);

        auto again = replay(p, decisions, {semantics});
        REQUIRE(again.plan);
        CHECK(*again.plan == plan);
        CHECK(again.final_state.log == s.state().log);
    }
}
