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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plancraft/bounds.hpp"
#include "plancraft/engine.hpp"
#include "plancraft/model.hpp"
#include "plancraft/staffing.hpp"

namespace plancraft::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class NumberStyle {
    Shortest,  // shortest text that parses back to the same double
    Fixed9,    // nine fractional digits, for reports and golden files
};

/// Compact, sorted-key JSON text. Integers print as integers; floating
/// values follow `style`.
std::string canonical_dump(const Json& value, NumberStyle style);

/// Formats a real with nine fractional digits.
std::string fixed9(double value);

class DocumentError : public InvalidInput {
public:
    enum class Reason { Syntax, Schema, UnsupportedVersion, Validation };

    DocumentError(Reason reason, const std::string& message, ValidationReport report = {});
    Reason reason() const { return reason_; }
    const ValidationReport& report() const { return report_; }

private:
    Reason reason_;
    ValidationReport report_;
};

Json to_json(const Project& project);
/// Parses without validating the project.
Project project_from_json(const Json& doc);

/// Parse, check the schema version, validate. Throws DocumentError.
Project load_project(std::string_view text);
Project load_project_file(const std::string& path);
std::string save_project(const Project& project);

Json to_json(const Worker& worker);
Worker worker_from_json(const Json& doc, std::size_t work_type_count);

Json to_json(const ValidationReport& report);
Json to_json(const bounds::WaveSchedule& schedule);

Json shortfalls_json(const std::vector<staffing::Shortfall>& shortfalls, const Project& project);
Json assignment_json(const std::vector<staffing::Assignment>& cells, const Project& project);

// Prompts, decisions and plans name work types by label; `project` supplies them.
Json to_json(const engine::DecisionPrompt& prompt, const Project& project);
engine::DecisionPrompt prompt_from_json(const Json& doc, const Project& project);
Json to_json(const engine::Decision& decision, const Project& project);
engine::Decision decision_from_json(const Json& doc, const Project& project);
Json to_json(const engine::Plan& plan, const Project& project);
Json trace_json(const std::vector<engine::ConcessionStep>& trace, const Project& project);
Json to_json(const engine::SessionEvent& event);
Json to_json(const engine::StalemateReport& report, const Project& project);
Json state_json(const engine::Session& session);

/// Plan document text, byte-stable.
std::string save_plan(const engine::Plan& plan, const Project& project);
/// One row per task: id,start,finish,crew,cost.
std::string schedule_csv(const engine::Plan& plan, const Project& project);

std::size_t work_type_index(const Project& project, const std::string& label);

}  // namespace plancraft::io
