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

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "plancraft/decision.hpp"

namespace plancraft::policy {

struct StateSummary {
    double clock = 0.0;
    double committed_cost = 0.0;
    staffing::IdealPoint ideal;
};

enum class Kind { AlwaysAccept, BudgetCap, DeadlineCap, External };

/// An answer source living outside the process (a terminal, a UI). Returning
/// nullopt abstains.
using ExternalSource =
    std::function<std::optional<engine::Decision>(const engine::DecisionPrompt&, const StateSummary&)>;

struct Policy {
    Kind kind = Kind::AlwaysAccept;
    double limit = 0.0;  // BudgetCap: cost ceiling; DeadlineCap: time ceiling
    ExternalSource external;
    std::chrono::milliseconds timeout{std::chrono::minutes(10)};

    static Policy always_accept() { return {}; }
    static Policy budget_cap(double limit) { return {Kind::BudgetCap, limit, {}, {}}; }
    static Policy deadline_cap(double limit) { return {Kind::DeadlineCap, limit, {}, {}}; }
    static Policy external_source(ExternalSource source,
                                  std::chrono::milliseconds timeout = std::chrono::minutes(10)) {
        return {Kind::External, 0.0, std::move(source), timeout};
    }
};

/// `always-accept`, `budget:<real>`, `deadline:<real>` or `external`. The
/// external form comes back without a source; the caller attaches one.
Policy parse_policy(const std::string& spec);

std::string to_string(const Policy& policy);

/// The ready task with the largest total demand (ties: smallest id), deferred
/// alone. nullopt when the progress rule forbids it.
std::optional<engine::Decision> defer_largest(const engine::DecisionPrompt& prompt);

/// One answer per prompt; nullopt means abstain, which ends the session in a
/// stalemate. Scripted kinds never add workers.
std::optional<engine::Decision> decide(const Policy& policy, const engine::DecisionPrompt& prompt,
                                       const StateSummary& summary);

}  // namespace plancraft::policy
