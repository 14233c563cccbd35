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
#include <vector>

namespace plancraft::detail {

// A demand of `demand` interchangeable slots; cost[w] is the price of putting
// worker w on one of them, or nullopt if w may not take it.
struct SlotGroup {
    std::int64_t demand = 0;
    std::vector<std::optional<double>> cost;
};

struct FlowResult {
    bool complete = false;            // every slot filled
    double cost = 0.0;
    std::vector<int> group_of_worker;  // -1 when idle
    std::vector<std::int64_t> unmet;   // per group, from a maximum partial fill
};

// Min-cost max-flow: source -> worker (cap 1) -> group (cap 1, priced) -> sink
// (cap demand). Successive shortest paths with Bellman-Ford, one unit per
// augmentation. The fill is maximum; among maximum fills it is cheapest.
FlowResult min_cost_assignment(const std::vector<SlotGroup>& groups, std::size_t worker_count);

}  // namespace plancraft::detail
