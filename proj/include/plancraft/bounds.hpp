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

#include <vector>

#include "plancraft/model.hpp"

namespace plancraft::bounds {

struct WaveEntry {
    TaskId task;
    double start_offset = 0.0;  // every task of a wave starts when the wave opens
    double completion = 0.0;    // absolute completion time
};

struct Wave {
    double start_time = 0.0;
    std::vector<WaveEntry> entries;  // in completion order, simultaneous completions by id
};

struct WaveSchedule {
    std::vector<Wave> waves;
    double total_duration = 0.0;
};

struct DurationRange {
    double t_min = 0.0;
    double t_max = 0.0;
};

/// Upper duration bound: all tasks run one after another.
double t_max(const Project& project);

/// Lower duration bound by waves: every ready task is admitted at once, the
/// clock is stepped through their completions, and the next wave is opened
/// only after the whole current wave has finished. Capacity is ignored.
///
/// At a wave boundary nothing is running, so both precedence semantics admit
/// the same set; the parameter is accepted for symmetry with the engine.
WaveSchedule t_min_wave(const Project& project,
                        PrecedenceSemantics semantics = PrecedenceSemantics::FinishToStart);

DurationRange duration_range(const Project& project,
                             PrecedenceSemantics semantics = PrecedenceSemantics::FinishToStart);

/// Longest duration-weighted dependency path. Diagnostic only: the wave
/// bound can exceed it.
double critical_path_length(const Project& project);

}  // namespace plancraft::bounds
