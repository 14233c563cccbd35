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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "plancraft/cli.hpp"
#include "plancraft/io.hpp"

using namespace plancraft;
using namespace plancraft::testing;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::ostringstream out, err;
    std::istringstream in(input);
    int code = cli::cli_main(args, out, err, in);
    return {code, out.str(), err.str()};
}

std::string line_value(const std::string& text, const std::string& key) {
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);)
        if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

}  // namespace

TEST_CASE("validate") {
    auto ok = run({"validate", fixture("straight_line.json")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("topology straight-line") != std::string::npos);
    auto bad = run({"validate", fixture("cycle.json")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("dependency-cycle") != std::string::npos);
    CHECK(run({"validate", "/no/such/file.json"}).code == 1);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"plan", fixture("star.json")}).code == 2);
    CHECK(run({"bounds", fixture("star.json"), "--semantics", "sideways"}).code == 2);
    CHECK(run({"plan", fixture("star.json"), "--policy", "greedy"}).code == 2);
}

TEST_CASE("bounds") {
    auto r = run({"bounds", fixture("scarce.json")});
    REQUIRE(r.code == 0);
    CHECK(line_value(r.out, "t_min") == "8.000000000");
    CHECK(line_value(r.out, "t_max") == "12.000000000");
    CHECK(!line_value(r.out, "critical_path").empty());
}

TEST_CASE("ideal and plan agree on the straight-line fixture") {
    auto ideal = run({"ideal", fixture("straight_line.json")});
    REQUIRE(ideal.code == 0);
    CHECK(line_value(ideal.out, "t_star") == "10.000000000");
    CHECK(line_value(ideal.out, "c_star") == "84.000000000");
    auto plan = run({"plan", fixture("straight_line.json"), "--policy", "always-accept"});
    REQUIRE(plan.code == 0);
    CHECK(line_value(plan.out, "total_duration") == line_value(ideal.out, "t_star"));
    CHECK(line_value(plan.out, "total_cost") == line_value(ideal.out, "c_star"));
    CHECK(line_value(plan.out, "hierarchy") == "A1 A2 A3");
    CHECK(line_value(plan.out, "concessions") == "0");
}

TEST_CASE("infeasible fixture names the failing task") {
    auto ideal = run({"ideal", fixture("infeasible.json")});
    CHECK(ideal.code == 1);
    CHECK(ideal.out.find("A2") != std::string::npos);
    auto plan = run({"plan", fixture("infeasible.json"), "--policy", "always-accept"});
    CHECK(plan.code == 1);
    CHECK(line_value(plan.out, "phase") == "stalemate");
    CHECK(plan.out.find("cannot be staffed even alone: A2") != std::string::npos);
}

TEST_CASE("plan writes the document, table and trace") {
    auto dir = std::filesystem::temp_directory_path() / "plancraft-cli-test";
    std::filesystem::create_directories(dir);
    auto plan_path = (dir / "plan.json").string();
    auto csv_path = (dir / "plan.csv").string();
    auto trace_path = (dir / "trace.json").string();
    auto r = run({"plan", fixture("scarce.json"), "--policy", "always-accept", "--out", plan_path, "--csv", csv_path,
                  "--trace", trace_path});
    REQUIRE(r.code == 0);
    CHECK(line_value(r.out, "total_duration") == "12.000000000");
    std::ifstream plan_in(plan_path), trace_in(trace_path), csv_in(csv_path);
    auto plan = io::Json::parse(plan_in);
    auto trace = io::Json::parse(trace_in);
    CHECK(plan.at("trace") == trace);
    CHECK(trace.size() == 3);
    std::string header;
    std::getline(csv_in, header);
    CHECK(header == "id,start,finish,crew,cost");
    std::filesystem::remove_all(dir);
}

TEST_CASE("external policy reads answers from the input stream") {
    // The same answers the always-accept policy gives on this fixture.
    auto r = run({"plan", fixture("scarce.json"), "--policy", "external"}, "defer A2\ndefer A3\ndefer A2\n");
    REQUIRE(r.code == 0);
    CHECK(r.err.find("prompt ") != std::string::npos);
    auto scripted = run({"plan", fixture("scarce.json"), "--policy", "always-accept"});
    CHECK(r.out == scripted.out);

    auto stalled = run({"plan", fixture("scarce.json"), "--policy", "external"}, "abstain\n");
    CHECK(stalled.code == 1);
    CHECK(line_value(stalled.out, "phase") == "stalemate");
}

TEST_CASE("budget and deadline policies run") {
    CHECK(run({"plan", fixture("scarce.json"), "--policy", "budget:1000"}).code == 0);
    CHECK(run({"plan", fixture("scarce.json"), "--policy", "deadline:100", "--semantics", "finish"}).code == 0);
}
