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

#include "min_cost_flow.hpp"

#include <deque>
#include <limits>

namespace plancraft::detail {

namespace {

struct Edge {
    int to;
    int capacity;
    double cost;
};

class FlowNetwork {
public:
    explicit FlowNetwork(int nodes) : adjacency_(nodes) {}

    int add_edge(int from, int to, int capacity, double cost) {
        adjacency_[from].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({to, capacity, cost});
        adjacency_[to].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({from, 0, -cost});
        return static_cast<int>(edges_.size()) - 2;
    }

    // Pushes one unit along a cheapest residual path. Returns false when the
    // sink is unreachable.
    bool augment(int source, int sink, double& total_cost) {
        const int n = static_cast<int>(adjacency_.size());
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<int> via(n, -1);
        std::vector<bool> queued(n, false);
        std::deque<int> queue{source};
        dist[source] = 0.0;
        queued[source] = true;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            queued[u] = false;
            for (int e : adjacency_[u]) {
                const Edge& edge = edges_[e];
                // Strict improvement beyond rounding noise keeps SPFA from cycling.
                if (edge.capacity > 0 && dist[u] + edge.cost < dist[edge.to] - 1e-12) {
                    dist[edge.to] = dist[u] + edge.cost;
                    via[edge.to] = e;
                    if (!queued[edge.to]) {
                        queued[edge.to] = true;
                        queue.push_back(edge.to);
                    }
                }
            }
        }
        if (via[sink] < 0) return false;
        for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) {
            edges_[via[v]].capacity -= 1;
            edges_[via[v] ^ 1].capacity += 1;
        }
        total_cost += dist[sink];
        return true;
    }

    const Edge& edge(int id) const { return edges_[id]; }

private:
    std::vector<std::vector<int>> adjacency_;
    std::vector<Edge> edges_;
};

}  // namespace

FlowResult min_cost_assignment(const std::vector<SlotGroup>& groups, std::size_t worker_count) {
    const int workers = static_cast<int>(worker_count);
    const int group_count = static_cast<int>(groups.size());
    const int source = 0;
    const int sink = 1 + workers + group_count;
    FlowNetwork net(sink + 1);

    std::int64_t total_demand = 0;
    for (int w = 0; w < workers; ++w) net.add_edge(source, 1 + w, 1, 0.0);
    std::vector<int> sink_edges(group_count);
    struct Link {
        int edge, worker, group;
    };
    std::vector<Link> links;
    for (int g = 0; g < group_count; ++g) {
        total_demand += groups[g].demand;
        sink_edges[g] = net.add_edge(1 + workers + g, sink, static_cast<int>(groups[g].demand), 0.0);
        if (groups[g].demand == 0) continue;
        for (int w = 0; w < workers; ++w) {
            const auto& price = groups[g].cost[w];
            if (price) links.push_back({net.add_edge(1 + w, 1 + workers + g, 1, *price), w, g});
        }
    }

    FlowResult result;
    std::int64_t flow = 0;
    while (flow < total_demand && net.augment(source, sink, result.cost)) ++flow;

    result.complete = flow == total_demand;
    result.group_of_worker.assign(worker_count, -1);
    for (const auto& link : links)
        if (net.edge(link.edge).capacity == 0) result.group_of_worker[link.worker] = link.group;
    result.unmet.resize(group_count);
    for (int g = 0; g < group_count; ++g) result.unmet[g] = net.edge(sink_edges[g]).capacity;
    return result;
}

}  // namespace plancraft::detail
