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

#include "plancraft/bounds.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace plancraft::bounds {

double t_max(const Project& project) {
    double total = 0.0;
    for (const auto& t : project.tasks) total += t.duration;
    return total;
}

WaveSchedule t_min_wave(const Project& project, PrecedenceSemantics /*semantics*/) {
    require_valid(project);

    std::map<TaskId, const Task*> pending;
    for (const auto& t : project.tasks) pending.emplace(t.id, &t);
    std::set<TaskId> finished;

    WaveSchedule schedule;
    double clock = 0.0;
    while (!pending.empty()) {
        // Admit everything whose predecessors are done.
        std::map<TaskId, double> remaining;
        for (auto it = pending.begin(); it != pending.end();) {
            const Task& task = *it->second;
            bool ready = std::all_of(task.predecessors.begin(), task.predecessors.end(),
                                     [&](const TaskId& p) { return finished.count(p) > 0; });
            if (ready) {
                remaining.emplace(task.id, task.duration);
                it = pending.erase(it);
            } else {
                ++it;
            }
        }
        if (remaining.empty())
            throw InternalError("wave algorithm found no ready task while tasks remain");

        Wave wave;
        wave.start_time = clock;
        // Drain: step to the next completion until the wave is empty.
        while (!remaining.empty()) {
            double step = std::numeric_limits<double>::infinity();
            for (const auto& [id, left] : remaining) step = std::min(step, left);
            clock += step;
            for (auto it = remaining.begin(); it != remaining.end();) {
                it->second -= step;
                if (it->second <= kEpsilon) {
                    wave.entries.push_back({it->first, 0.0, clock});
                    finished.insert(it->first);
                    it = remaining.erase(it);
                } else {
                    ++it;
                }
            }
        }
        schedule.waves.push_back(std::move(wave));
    }
    schedule.total_duration = clock;
    return schedule;
}

DurationRange duration_range(const Project& project, PrecedenceSemantics semantics) {
    return {t_min_wave(project, semantics).total_duration, t_max(project)};
}

double critical_path_length(const Project& project) {
    require_valid(project);
    std::map<TaskId, const Task*> by_id;
    for (const auto& t : project.tasks) by_id.emplace(t.id, &t);

    std::map<TaskId, double> finish;
    // Memoized DFS; the project is acyclic after validation.
    auto earliest_finish = [&](auto&& self, const Task& task) -> double {
        if (auto it = finish.find(task.id); it != finish.end()) return it->second;
        double start = 0.0;
        for (const auto& p : task.predecessors) start = std::max(start, self(self, *by_id.at(p)));
        return finish[task.id] = start + task.duration;
    };
    double longest = 0.0;
    for (const auto& t : project.tasks) longest = std::max(longest, earliest_finish(earliest_finish, t));
    return longest;
}

}  // namespace plancraft::bounds
