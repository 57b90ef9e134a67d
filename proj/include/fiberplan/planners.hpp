// SPDX-License-Identifier: BSD-3-Clause
//
// Multilevel planners over a bundle sequence: QRRT, QRRT*, QMP and QMP*, with
// RRT, RRT*, PRM and PRM* as their single-level specializations.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fiberplan/bundles.hpp"
#include "fiberplan/environments.hpp"
#include "fiberplan/heuristics.hpp"
#include "fiberplan/level_graph.hpp"
#include "fiberplan/samplers.hpp"
#include "fiberplan/spaces.hpp"

namespace fiberplan {

enum class Algorithm { QRRT, QRRTStar, QMP, QMPStar };

/// Planner names accepted by configs. The baselines run the same algorithm
/// on the problem with every projection removed.
enum class PlannerName { QRRT, QRRTStar, QMP, QMPStar, RRT, RRTStar, PRM, PRMStar };

Algorithm algorithm_of(PlannerName name);
bool is_baseline(PlannerName name);
std::string planner_name(PlannerName name);
PlannerName parse_planner_name(const std::string& name);

struct PlannerConfig {
    PlannerName planner = PlannerName::QRRT;
    double range_factor = 0.2;      // steering range as a fraction of max_extent
    double resolution_factor = 0.01;  // motion check spacing as a fraction of max_extent
    std::optional<double> k_prm;    // default 2e(1 + 1/d)
    std::optional<double> k_rrt;    // default 2e(1 + 1/d)
    std::size_t qmp_neighbors = 10;
    double goal_bias = 0.05;
    double time_limit = 60.0;       // seconds
    std::optional<std::size_t> level_budget;          // grow calls per level
    std::optional<std::size_t> infeasibility_window;  // m
    std::uint64_t seed = 0;
    /// Keep growing the top level after its first solution (until the
    /// budget or the time limit).
    bool optimize = false;
    bool find_section = true;
    std::size_t section_depth = 3;      // d_MAX
    std::size_t section_sidesteps = 10;  // b_MAX
    std::size_t trace_interval = 1000;  // roadmap cost refresh, in grow calls
    SamplerConfig sampler;
    MetricKind metric = MetricKind::Intrinsic;
    Importance importance;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const PlannerConfig&) const = default;
};

double default_k_constant(std::size_t dim);

/// Visibility-based coverage test used to declare a level infeasible.
///
/// Guards start at the start and goal states. A valid sample seen by no
/// guard becomes a guard, a sample joining two guard components merges them;
/// both reset the counter. Invalid samples and samples seen by exactly one
/// component increment it.
class CoverageMonitor {
public:
    CoverageMonitor(const StateSpace* space, ValidityFn valid, double resolution, State start, State goal);

    void observe(const State& x);
    std::size_t counter() const { return counter_; }
    std::size_t guards() const { return guards_.size(); }
    bool start_goal_connected() const;

private:
    std::size_t find(std::size_t i) const;

    const StateSpace* space_;
    ValidityFn valid_;
    double resolution_;
    std::vector<State> guards_;
    mutable std::vector<std::size_t> component_;
    std::size_t counter_ = 0;
};

/// One bundle space X_k with its graph and projected start and goal.
struct Level {
    Level(std::size_t index, const StateSpace* space, const Bundle* bundle, ValidityFn valid, LevelGraph::Mode mode,
          State start, GoalRegion goal, const PlannerConfig& config);

    std::size_t index;
    const StateSpace* space;
    const Bundle* bundle;  // to the level below; null on the lowest level
    ValidityFn valid;
    LevelGraph graph;
    State start;
    GoalRegion goal;
    double range;
    double resolution;

    VertexId start_vertex = 0;
    std::optional<VertexId> goal_vertex;  // roadmap mode
    std::vector<VertexId> goal_vertices;  // tree mode
    std::size_t iterations = 0;

    std::optional<Path> solution;
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t last_refresh = 0;
    std::optional<CoverageMonitor> monitor;

    bool check_motion(const State& x, const State& y) const;
    bool in_goal(const State& x) const;
    bool has_solution() const { return solution.has_value(); }

    /// Adds `s` joined to `from` (tree child or roadmap edge) and records it
    /// when it reaches the goal.
    VertexId extend(VertexId from, const State& s);
    /// Recomputes the best solution; true if it changed.
    bool refresh_solution();
};

/// Single validity check of the straight motion x -> y at `resolution`,
/// endpoints included.
bool check_motion(const StateSpace& space, const ValidityFn& valid, const State& x, const State& y,
                  double resolution);

/// Reparents y below x if that lowers y's cost and the motion is
/// valid. Returns true on change.
bool rewire(Level& level, VertexId x, VertexId y);

enum class PlanStatus { Solved, TimedOut, Infeasible, Error };
std::string status_name(PlanStatus s);

struct PlanOutcome {
    PlanStatus status = PlanStatus::TimedOut;
    double confidence = 0.0;  // Infeasible only
    std::optional<Path> path;  // on the top level
    double cost = std::numeric_limits<double>::infinity();
    double time_s = 0.0;
    std::vector<std::size_t> vertices_per_level;
    std::vector<std::size_t> iterations_per_level;
    /// (top-level grow call, best cost) after every improvement.
    std::vector<std::pair<std::size_t, double>> cost_trace;
    std::string message;
};

struct SectionResult {
    bool success = false;
    std::size_t depth = 0;
    std::size_t sidesteps = 0;
};

class BundlePlanner {
public:
    BundlePlanner(PlanningProblem problem, PlannerConfig config);
    BundlePlanner(const BundlePlanner&) = delete;
    BundlePlanner& operator=(const BundlePlanner&) = delete;

    PlanOutcome solve();

    const PlanningProblem& problem() const { return problem_; }
    const PlannerConfig& config() const { return config_; }
    std::size_t active_levels() const { return levels_.size(); }
    Level& level(std::size_t k) { return *levels_.at(k); }
    const Level& level(std::size_t k) const { return *levels_.at(k); }
    Rng& rng() { return rng_; }

    /// Adds level k (start, and goal for roadmaps). Levels are entered in
    /// order; the problem's projected start must be feasible.
    Level& enter_level(std::size_t k);

    /// One grow call on level k.
    void grow(std::size_t k);
    /// Returns the new vertex, if any.
    std::optional<VertexId> grow_qrrt(Level& level);
    void grow_qrrt_star(Level& level);
    void grow_qmp(Level& level);

    State sample(Level& level);
    std::vector<Neighbor> nearest(const Level& level, const State& x, std::size_t k, VertexId exclude) const;

    SectionResult find_section(std::size_t k);
    SectionResult find_section_recursive(std::size_t k, const Path& base_path, VertexId from, std::size_t depth,
                                         SectionFlavor flavor);

    bool level_terminated(std::size_t k) const;
    bool timed_out() const;
    bool infeasible() const { return infeasible_; }

private:
    bool top(std::size_t k) const { return k + 1 == problem_.levels(); }
    void check_infeasible(std::size_t k);
    void note_cost(std::size_t k);

    PlanningProblem problem_;
    PlannerConfig config_;
    Algorithm algorithm_;
    Rng rng_;
    std::vector<std::unique_ptr<Level>> levels_;
    std::chrono::steady_clock::time_point started_;
    bool infeasible_ = false;
    std::vector<std::pair<std::size_t, double>> trace_;
};

/// Runs the configured planner; baselines are solved on problem.single_level().
PlanOutcome plan(const PlanningProblem& problem, const PlannerConfig& config);

/// Clips a base path at `b`: returns b followed by the waypoints after the
/// segment closest to b (ties toward the later segment).
Path clip_path(const StateSpace& base, const Path& path, const State& b);

}  // namespace fiberplan
