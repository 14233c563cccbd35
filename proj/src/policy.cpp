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

#include "plancraft/policy.hpp"

#include <condition_variable>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace plancraft::policy {

namespace {

double parse_limit(const std::string& spec, std::size_t offset) {
    const std::string number = spec.substr(offset);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(number, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (number.empty() || used != number.size())
        throw InvalidInput("policy '" + spec + "': expected a number after ':'");
    return value;
}

// Runs the external source on its own thread so a silent UI cannot hold the
// session forever. On timeout the thread is left to finish into a dead box.
std::optional<engine::Decision> ask_external(const Policy& policy, const engine::DecisionPrompt& prompt,
                                             const StateSummary& summary) {
    if (!policy.external) return std::nullopt;
    struct Box {
        std::mutex mutex;
        std::condition_variable ready;
        bool done = false;
        std::optional<engine::Decision> answer;
    };
    auto box = std::make_shared<Box>();
    std::thread([box, source = policy.external, prompt, summary] {
        std::optional<engine::Decision> answer;
        try {
            answer = source(prompt, summary);
        } catch (...) {
            answer = std::nullopt;
        }
        std::lock_guard lock(box->mutex);
        box->answer = std::move(answer);
        box->done = true;
        box->ready.notify_all();
    }).detach();
    std::unique_lock lock(box->mutex);
    if (!box->ready.wait_for(lock, policy.timeout, [&] { return box->done; })) return std::nullopt;
    return box->answer;
}

}  // namespace

Policy parse_policy(const std::string& spec) {
    if (spec == "always-accept") return Policy::always_accept();
    if (spec == "external") return Policy::external_source({});
    if (spec.rfind("budget:", 0) == 0) return Policy::budget_cap(parse_limit(spec, 7));
    if (spec.rfind("deadline:", 0) == 0) return Policy::deadline_cap(parse_limit(spec, 9));
    throw InvalidInput("unknown policy '" + spec + "' (always-accept, budget:<real>, deadline:<real>, external)");
}

std::string to_string(const Policy& policy) {
    std::ostringstream out;
    switch (policy.kind) {
        case Kind::AlwaysAccept: out << "always-accept"; break;
        case Kind::BudgetCap: out << "budget:" << policy.limit; break;
        case Kind::DeadlineCap: out << "deadline:" << policy.limit; break;
        case Kind::External: out << "external"; break;
    }
    return out.str();
}

std::optional<engine::Decision> defer_largest(const engine::DecisionPrompt& prompt) {
    const engine::ReadyTask* victim = nullptr;
    for (const auto& r : prompt.ready) {  // sorted by id, so strict > keeps the smallest id on ties
        if (!victim || r.total_demand > victim->total_demand) victim = &r;
    }
    if (!victim) return std::nullopt;
    std::set<TaskId> chosen{victim->id};
    if (!engine::deferral_allowed(prompt, chosen)) return std::nullopt;
    return engine::Decision{engine::DeferTasks{chosen}};
}

std::optional<engine::Decision> decide(const Policy& policy, const engine::DecisionPrompt& prompt,
                                       const StateSummary& summary) {
    using engine::PromptCase;
    switch (policy.kind) {
        case Kind::AlwaysAccept:
            if (prompt.kind == PromptCase::CostOverrun) return engine::Decision{engine::AcceptCost{}};
            return defer_largest(prompt);

        case Kind::BudgetCap:
            if (prompt.kind == PromptCase::CostOverrun &&
                summary.committed_cost + prompt.proposed_cost <= policy.limit + kEpsilon)
                return engine::Decision{engine::AcceptCost{}};
            return defer_largest(prompt);

        case Kind::DeadlineCap:
            if (prompt.kind == PromptCase::CostOverrun) {
                if (summary.clock + prompt.defer_delay_bound > policy.limit + kEpsilon)
                    return engine::Decision{engine::AcceptCost{}};
                if (auto deferral = defer_largest(prompt)) return deferral;
                return engine::Decision{engine::AcceptCost{}};
            }
            return defer_largest(prompt);

        case Kind::External:
            return ask_external(policy, prompt, summary);
    }
    return std::nullopt;
}

}  // namespace plancraft::policy
