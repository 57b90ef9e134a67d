// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/environments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fiberplan {

double distance_to_rect(double x, double y, const Rect& r)
{
    double dx = std::max({r.xlo - x, 0.0, x - r.xhi});
    double dy = std::max({r.ylo - y, 0.0, y - r.yhi});
    return std::sqrt(dx * dx + dy * dy);
}

PlanningProblem PlanningProblem::single_level() const
{
    PlanningProblem flat{name, BundleSequence(sequence.spaces().back()), {validity.back()}, start, goal,
                         optimal_cost};
    return flat;
}

void PlanningProblem::validate(std::size_t admissibility_samples, std::uint64_t seed) const
{
    const std::size_t K = levels();
    if (validity.size() != K)
        throw std::invalid_argument(name + ": need one validity function per level");
    const StateSpace& top = sequence.spaces().back();
    top.require_member(start, "start");
    top.require_member(goal.center, "goal");
    if (goal.radius < 0.0)
        throw std::invalid_argument(name + ": goal radius must be nonnegative");
    if (!top.contains(start) || !validity.back()(start))
        throw std::invalid_argument(name + ": start state is infeasible");
    if (!top.contains(goal.center) || !validity.back()(goal.center))
        throw std::invalid_argument(name + ": goal center is infeasible");
    Rng rng(seed);
    for (std::size_t k = 1; k < K; ++k)
    {
        std::size_t violations =
            check_admissible(sequence.bundle_below(k), validity[k], validity[k - 1], admissibility_samples, rng);
        if (violations > 0)
        {
            std::ostringstream msg;
            msg << name << ": projection onto level " << k << " is not admissible (" << violations << " of "
                << admissibility_samples << " samples)";
            throw std::invalid_argument(msg.str());
        }
    }
}

PlanningProblem make_problem(const Environment& env, const std::optional<std::vector<ProjectionSpec>>& sequence)
{
    BundleSequence seq = BundleSequence::from_specs(env.total, sequence ? *sequence : env.default_sequence);
    std::vector<ValidityFn> validity;
    for (std::size_t k = 0; k < seq.levels(); ++k)
        validity.push_back(env.validity_for(seq.coords_at(k)));
    PlanningProblem problem{env.name, std::move(seq), std::move(validity), env.start, env.goal, env.optimal_cost};
    problem.validate();
    return problem;
}

bool hypercube_valid(std::span<const double> x, double epsilon)
{
    int mid = 0;
    for (double v : x)
    {
        if (v < 0.0 || v > 1.0)
            return false;
        if (std::min(v, 1.0 - v) > epsilon && ++mid > 1)
            return false;
    }
    return true;
}

Environment hypercube_environment(std::size_t n, double epsilon)
{
    if (n < 2)
        throw std::invalid_argument("hypercube needs n >= 2");
    Environment env;
    env.name = "hypercube";
    env.total = StateSpace::unit_cube(n);
    env.start = State(std::vector<double>(n, 0.0));
    env.goal = GoalRegion{State(std::vector<double>(n, 1.0)), 0.0};
    env.validity_for = [epsilon](const std::vector<std::size_t>&) -> ValidityFn {
        return [epsilon](const State& x) { return hypercube_valid(x.coords(), epsilon); };
    };
    for (std::size_t m = n - 1; m >= 2; --m)
        env.default_sequence.push_back(ProjectionSpec{{{ProjectionTag::RNPrefix, m}}, false});
    return env;
}

PlanningProblem hypercube_problem(std::size_t n, double epsilon)
{
    return make_problem(hypercube_environment(n, epsilon));
}

bool segment_valid(const StateSpace& space, const ValidityFn& valid, const State& x, const State& y,
                   double resolution)
{
    double d = space.distance(x, y);
    std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(d / resolution)));
    State s;
    for (std::size_t i = 0; i <= steps; ++i)
    {
        space.interpolate(x, y, static_cast<double>(i) / static_cast<double>(steps), s);
        if (!valid(s))
            return false;
    }
    return true;
}

std::vector<Rect> wall_gap_obstacles(double gap_width)
{
    const double half = gap_width / 2.0;
    return {Rect{4.9, 0.0, 5.1, 5.0 - half}, Rect{4.9, 5.0 + half, 5.1, 10.0}};
}

Environment wall_gap_environment(double gap_width)
{
    if (!(gap_width >= 0.0) || gap_width > 10.0)
        throw std::invalid_argument("gap_width must lie in [0, 10]");
    Environment env;
    env.name = "wall_gap";
    env.total = StateSpace({Component::box(2, 0.0, 10.0)});
    env.start = State{1.0, 4.0};
    env.goal = GoalRegion{State{9.0, 6.0}, 0.0};
    const auto walls = wall_gap_obstacles(gap_width);
    env.validity_for = [walls](const std::vector<std::size_t>& kept) -> ValidityFn {
        std::optional<std::size_t> xi, yi;
        for (std::size_t i = 0; i < kept.size(); ++i)
        {
            if (kept[i] == 0)
                xi = i;
            if (kept[i] == 1)
                yi = i;
        }
        if (!xi || !yi)
            return [](const State& s) {
                return std::all_of(s.values.begin(), s.values.end(), [](double v) { return v >= 0.0 && v <= 10.0; });
            };
        return [walls, x = *xi, y = *yi](const State& s) {
            for (const Rect& r : walls)
                if (distance_to_rect(s[x], s[y], r) < kWallRobotRadius)
                    return false;
            return s[x] >= 0.0 && s[x] <= 10.0 && s[y] >= 0.0 && s[y] <= 10.0;
        };
    };
    env.default_sequence.push_back(ProjectionSpec{{{ProjectionTag::RNPrefix, 1}}, false});
    ValidityFn full = env.validity_for({0, 1});
    if (segment_valid(env.total, full, env.start, env.goal.center, 1e-3))
        env.optimal_cost = env.total.distance(env.start, env.goal.center);
    return env;
}

PlanningProblem wall_gap_problem(double gap_width)
{
    return make_problem(wall_gap_environment(gap_width));
}

std::vector<Rect> crossroad_obstacles()
{
    return {Rect{1.0, 1.0, 5.0, 5.0}, Rect{-5.0, 1.0, -1.0, 5.0}, Rect{-5.0, -5.0, -1.0, -1.0},
            Rect{1.0, -5.0, 5.0, -1.0}};
}

Environment disk_crossing_environment(std::size_t robots)
{
    if (robots < 2 || robots > 8)
        throw std::invalid_argument("disk crossing supports 2 to 8 robots");
    Environment env;
    env.name = "disk_crossing";
    std::vector<Component> comps(robots, Component::box(2, -5.0, 5.0));
    env.total = StateSpace(comps);

    // Robot i enters from arm i mod 4 (W, E, N, S) and leaves through the
    // opposite arm, keeping to its lane; a second robot per arm starts and
    // stops one unit closer to the center.
    std::vector<double> start, goal;
    for (std::size_t i = 0; i < robots; ++i)
    {
        double d = 4.4 - static_cast<double>(i / 4);
        switch (i % 4)
        {
            case 0:
                start.insert(start.end(), {-d, -0.5});
                goal.insert(goal.end(), {d, -0.5});
                break;
            case 1:
                start.insert(start.end(), {d, 0.5});
                goal.insert(goal.end(), {-d, 0.5});
                break;
            case 2:
                start.insert(start.end(), {-0.5, d});
                goal.insert(goal.end(), {-0.5, -d});
                break;
            default:
                start.insert(start.end(), {0.5, -d});
                goal.insert(goal.end(), {0.5, d});
                break;
        }
    }
    env.start = State(start);
    env.goal = GoalRegion{State(goal), 0.0};

    const auto blocks = crossroad_obstacles();
    env.validity_for = [blocks](const std::vector<std::size_t>& kept) -> ValidityFn {
        // Level-local index of each present robot's x coordinate.
        std::vector<std::size_t> xs;
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (kept[i] % 2 == 0)
                xs.push_back(i);
        return [blocks, xs](const State& s) {
            constexpr double r = kDiskRobotRadius;
            for (std::size_t a = 0; a < xs.size(); ++a)
            {
                double x = s[xs[a]], y = s[xs[a] + 1];
                if (x < -5.0 || x > 5.0 || y < -5.0 || y > 5.0)
                    return false;
                for (const Rect& b : blocks)
                    if (distance_to_rect(x, y, b) < r)
                        return false;
                for (std::size_t c = 0; c < a; ++c)
                {
                    double dx = x - s[xs[c]], dy = y - s[xs[c] + 1];
                    if (dx * dx + dy * dy < 4.0 * r * r)
                        return false;
                }
            }
            return true;
        };
    };
    const std::size_t removed = (robots + 1) / 2;
    ProjectionSpec spec;
    for (std::size_t i = 0; i < robots; ++i)
        spec.components.push_back({i < robots - removed ? ProjectionTag::Identity : ProjectionTag::Drop, 0});
    env.default_sequence.push_back(spec);
    return env;
}

PlanningProblem disk_crossing_problem(std::size_t robots)
{
    return make_problem(disk_crossing_environment(robots));
}

Environment make_environment(const EnvironmentSpec& spec)
{
    if (spec.name == "hypercube")
        return hypercube_environment(spec.n, spec.epsilon);
    if (spec.name == "wall_gap")
        return wall_gap_environment(spec.gap_width);
    if (spec.name == "disk_crossing")
        return disk_crossing_environment(spec.robots);
    throw std::invalid_argument("unknown environment '" + spec.name + "'");
}

PlanningProblem make_problem(const EnvironmentSpec& spec)
{
    return make_problem(make_environment(spec), spec.sequence);
}

std::string describe(const EnvironmentSpec& spec)
{
    std::ostringstream out;
    out << spec.name << "(";
    if (spec.name == "hypercube")
        out << "n=" << spec.n;
    else if (spec.name == "wall_gap")
        out << "gap=" << spec.gap_width;
    else if (spec.name == "disk_crossing")
        out << "robots=" << spec.robots;
    out << ")";
    return out.str();
}

}  // namespace fiberplan
