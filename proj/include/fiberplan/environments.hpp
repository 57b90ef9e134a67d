// SPDX-License-Identifier: BSD-3-Clause
//
// Analytic planning problems: n-dof hypercube corridors, a disk robot passing
// a wall gap, and disk robots crossing at a crossroad.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fiberplan/bundles.hpp"
#include "fiberplan/spaces.hpp"

namespace fiberplan {

struct GoalRegion {
    State center;
    double radius = 0.0;
};

/// Axis-aligned rectangle [lo, hi] in the plane.
struct Rect {
    double xlo, ylo, xhi, yhi;
};

double distance_to_rect(double x, double y, const Rect& r);

struct PlanningProblem {
    std::string name;
    BundleSequence sequence;
    std::vector<ValidityFn> validity;  // one per level, lowest first
    State start;                       // on the top level
    GoalRegion goal;                   // on the top level
    std::optional<double> optimal_cost;

    std::size_t levels() const { return sequence.levels(); }
    const StateSpace& space(std::size_t k) const { return sequence.space(k); }

    /// Drops every projection, keeping only the top-level space.
    PlanningProblem single_level() const;

    /// Checks start and goal validity, and that every projection is
    /// admissible on `admissibility_samples` uniform samples. Throws
    /// std::invalid_argument otherwise.
    void validate(std::size_t admissibility_samples = 1000, std::uint64_t seed = 0) const;
};

/// A problem family with its constraint defined on any coordinate subset, so
/// that alternative bundle sequences can be configured.
struct Environment {
    std::string name;
    StateSpace total;
    State start;
    GoalRegion goal;
    /// Validity checker for a level keeping these top-level coordinates.
    std::function<ValidityFn(const std::vector<std::size_t>& kept)> validity_for;
    std::vector<ProjectionSpec> default_sequence;  // top-down
    std::optional<double> optimal_cost;
};

PlanningProblem make_problem(const Environment& env,
                             const std::optional<std::vector<ProjectionSpec>>& sequence = std::nullopt);

/// Feasible iff at most one coordinate has min(x_i, 1 - x_i) > epsilon.
bool hypercube_valid(std::span<const double> x, double epsilon = 0.1);

Environment hypercube_environment(std::size_t n, double epsilon = 0.1);
/// [0,1]^n -> [0,1]^(n-1) -> ... -> [0,1]^2, from (0,...,0) to (1,...,1).
PlanningProblem hypercube_problem(std::size_t n, double epsilon = 0.1);

inline constexpr double kWallRobotRadius = 0.5;
Environment wall_gap_environment(double gap_width);
/// Disk robot (r = 0.5) in [0,10]^2 crossing a wall at x = 5 through one gap
/// centred at y = 5; the base drops y and ignores the wall.
PlanningProblem wall_gap_problem(double gap_width);
std::vector<Rect> wall_gap_obstacles(double gap_width);

inline constexpr double kDiskRobotRadius = 0.4;
Environment disk_crossing_environment(std::size_t robots);
/// `robots` disks (r = 0.4) crossing a plus-shaped crossroad in [-5,5]^2;
/// the base removes the last ceil(m/2) robots.
PlanningProblem disk_crossing_problem(std::size_t robots);
std::vector<Rect> crossroad_obstacles();

/// Validity of the straight motion x -> y sampled every `resolution`.
bool segment_valid(const StateSpace& space, const ValidityFn& valid, const State& x, const State& y,
                   double resolution);

/// Builds an environment by name: "hypercube" (n), "wall_gap" (gap_width),
/// "disk_crossing" (robots).
struct EnvironmentSpec {
    std::string name = "hypercube";
    std::size_t n = 100;
    double epsilon = 0.1;
    double gap_width = 1.2;
    std::size_t robots = 4;
    std::optional<std::vector<ProjectionSpec>> sequence;

    bool operator==(const EnvironmentSpec&) const = default;
};

Environment make_environment(const EnvironmentSpec& spec);
PlanningProblem make_problem(const EnvironmentSpec& spec);
/// Short label such as "hypercube(n=100)".
std::string describe(const EnvironmentSpec& spec);

}  // namespace fiberplan
