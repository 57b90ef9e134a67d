// SPDX-License-Identifier: BSD-3-Clause
//
// JSON problem and suite configs. Keys are flat; unknown keys are rejected
// with the field path and line of the offending entry.

#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "fiberplan/bench.hpp"
#include "fiberplan/environments.hpp"
#include "fiberplan/planners.hpp"

namespace fiberplan {

struct ProblemConfig {
    EnvironmentSpec environment;
    PlannerConfig planner;
    std::optional<std::string> output;  // solution JSON path

    bool operator==(const ProblemConfig&) const = default;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::size_t line, const std::string& message);
    const std::string& field() const { return field_; }
    std::size_t line() const { return line_; }  // 0 when unknown

private:
    std::string field_;
    std::size_t line_;
};

using ParsedConfig = std::variant<ProblemConfig, BenchSuite>;

/// A document with an "experiments" key is a suite, anything else a problem.
ParsedConfig parse_config(const std::string& text);
ProblemConfig parse_problem_config(const std::string& text);
BenchSuite parse_suite(const std::string& text);

nlohmann::json planner_to_json(const PlannerConfig& config);
nlohmann::json environment_to_json(const EnvironmentSpec& spec);
nlohmann::json to_json(const ProblemConfig& config);
nlohmann::json to_json(const BenchSuite& suite);

/// Solution document: environment, planner, status, cost and the waypoints
/// split per top-level component. Contains no timing, so equal runs give
/// byte-identical output.
nlohmann::json solution_to_json(const ProblemConfig& config, const StateSpace& space, const PlanOutcome& outcome);
/// Waypoints of a solution document, re-joined into full states.
Path solution_path_from_json(const nlohmann::json& doc);

std::string sampling_name(GraphSampling s);
std::string path_bias_name(PathBiasMode m);
std::string metric_name(MetricKind m);
std::string importance_name(ImportanceKind k);

}  // namespace fiberplan
