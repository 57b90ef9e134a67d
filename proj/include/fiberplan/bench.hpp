// SPDX-License-Identifier: BSD-3-Clause
//
// Seeded benchmark suites, CSV records and summaries, the hypercube scaling
// study and the per-primitive meta-analysis.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fiberplan/environments.hpp"
#include "fiberplan/planners.hpp"

namespace fiberplan {

struct Experiment {
    EnvironmentSpec environment;
    std::vector<PlannerConfig> planners;
    std::size_t runs = 10;
    double time_limit = 60.0;
    std::uint64_t base_seed = 0;

    bool operator==(const Experiment&) const = default;
};

struct BenchSuite {
    std::vector<Experiment> experiments;
    std::string csv_path = "bench.csv";
    std::optional<std::string> svg_path;
    std::size_t parallel = 1;

    void validate() const;
    bool operator==(const BenchSuite&) const = default;
};

struct RunRecord {
    std::string planner;
    std::string environment;
    std::string params_hash;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    /// Wall time; runs that end without an answer are recorded at the limit.
    double time_s = 0.0;
    PlanStatus status = PlanStatus::TimedOut;
    double cost = 0.0;
    std::vector<std::size_t> vertices_per_level;

    bool operator==(const RunRecord&) const = default;
};

/// 64-bit FNV-1a of the canonical planner parameters (seed excluded), hex.
std::string params_hash(const PlannerConfig& config);

/// One seeded run. Exceptions become status Error.
RunRecord run_once(const PlanningProblem& problem, const std::string& environment, const PlannerConfig& config,
                   std::size_t run, std::uint64_t seed, double time_limit);

using ProgressFn = std::function<void(const RunRecord&)>;

/// Every (experiment, planner, run) cell, seed = base_seed + run. Cells run on
/// `parallel` threads; the result order does not depend on it.
std::vector<RunRecord> run_suite(const BenchSuite& suite, const ProgressFn& progress = {});

inline constexpr const char* kCsvHeader =
    "planner,environment,params_hash,run,seed,time_s,status,cost,vertices_per_level";
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(std::istream& in);
PlanStatus parse_status(const std::string& s);

struct CellSummary {
    std::string planner;
    std::string environment;
    std::string params_hash;
    std::size_t runs = 0;
    std::size_t successes = 0;
    double mean_time = 0.0;
    double median_time = 0.0;
    double min_time = 0.0;
    double max_time = 0.0;
    double success_rate() const { return runs ? static_cast<double>(successes) / static_cast<double>(runs) : 0.0; }
    /// Some runs ended without an answer and entered the mean at the limit.
    bool has_failures() const { return successes < runs; }
};

/// Groups by (planner, environment, params_hash) in first-appearance order.
/// Solved and Infeasible runs count as successes.
std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);
void write_summary(std::ostream& out, const std::vector<CellSummary>& cells);

/// Least-squares cubic c0 + c1 n + c2 n^2 + c3 n^3, optionally in log-time.
struct CubicFit {
    std::array<double, 4> coefficients{};
    double residual = 0.0;  // root-mean-square, in the fitted quantity
    bool log_time = false;

    double evaluate(double n) const;
};

CubicFit fit_cubic(const std::vector<double>& n, const std::vector<double>& time, bool log_time);

struct ScalingPoint {
    std::size_t n = 0;
    double mean_time = 0.0;
    std::size_t successes = 0;
    std::size_t runs = 0;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    CubicFit fit;
    std::vector<RunRecord> records;
};

/// Runs the hypercube at every n (ascending) and fits a cubic to the means.
ScalingResult scaling_study(const PlannerConfig& planner, const std::vector<std::size_t>& n_list, std::size_t runs,
                            double time_limit, std::uint64_t base_seed, bool log_time, std::size_t parallel = 1,
                            const ProgressFn& progress = {});

/// A primitive method varied by the meta-analysis.
struct MetaVariant {
    std::string axis;
    std::string name;
    std::function<void(PlannerConfig&)> apply;
};

/// metric {intrinsic, quotient}, importance {uniform, exponential, greedy},
/// sampling {rv, re, rdv}, find_section {on, off}.
std::vector<MetaVariant> default_meta_variants();
/// hypercube(20), disk_crossing(4), wall_gap(1.2).
std::vector<EnvironmentSpec> default_meta_environments();

struct MetaRow {
    std::string algorithm;
    std::string axis;
    std::string variant;
    double mean_time = 0.0;  // averaged over the environments
    double ratio = 1.0;
};

/// Ratios relative to the smallest value (which gets exactly 1).
std::vector<double> normalize_ratios(const std::vector<double>& values);

std::vector<MetaRow> meta_analysis(const std::vector<PlannerName>& algorithms,
                                   const std::vector<MetaVariant>& variants,
                                   const std::vector<EnvironmentSpec>& environments, std::size_t runs,
                                   double time_limit, std::uint64_t base_seed, std::size_t parallel = 1,
                                   std::vector<RunRecord>* records = nullptr, const ProgressFn& progress = {});
void write_meta_csv(std::ostream& out, const std::vector<MetaRow>& rows);

}  // namespace fiberplan
