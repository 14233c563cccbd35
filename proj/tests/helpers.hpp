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

#include <initializer_list>
#include <string>
#include <vector>

#include "plancraft/model.hpp"

namespace plancraft::testing {

inline Task task(std::string id, double duration, std::vector<double> work = {1.0},
                 std::initializer_list<std::string> preds = {}) {
    Task t;
    t.id = std::move(id);
    t.duration = duration;
    t.work = std::move(work);
    t.predecessors = preds;
    return t;
}

inline Worker worker(std::string id, std::vector<bool> skills, std::vector<double> rates) {
    return Worker{std::move(id), std::move(skills), std::move(rates)};
}

/// One work type "S1", no resources.
inline Project project(std::vector<Task> tasks, std::vector<Worker> workers = {}) {
    Project p;
    std::size_t q = tasks.empty() ? 1 : tasks.front().work.size();
    for (std::size_t i = 0; i < q; ++i) p.work_types.push_back("S" + std::to_string(i + 1));
    p.tasks = std::move(tasks);
    p.workers = std::move(workers);
    return p;
}

inline std::string fixture(const std::string& name) { return std::string(PLANCRAFT_FIXTURES) + "/" + name; }

}  // namespace plancraft::testing
