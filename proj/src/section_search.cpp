// SPDX-License-Identifier: BSD-3-Clause
//
// Section search: lift the base solution path into the bundle space, and when
// the lift is blocked, sidestep along the fiber and retry on the remainder of
// the base path with the other interpolation order.

#include <algorithm>
#include <cmath>
#include <limits>

#include "fiberplan/planners.hpp"

namespace fiberplan {

namespace {

// Parameter in [0, 1] of the point on segment a->b closest to q.
double closest_parameter(const StateSpace& space, const State& a, const State& b, const State& q)
{
    double len = space.distance(a, b);
    if (len == 0.0)
        return 0.0;
    // Golden-section search: the distance along a geodesic segment is
    // unimodal for every shipped component type.
    double lo = 0.0, hi = 1.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = space.distance(space.interpolate(a, b, c), q);
    double fd = space.distance(space.interpolate(a, b, d), q);
    for (int i = 0; i < 80; ++i)
    {
        if (fc <= fd)
        {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = space.distance(space.interpolate(a, b, c), q);
        }
        else
        {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = space.distance(space.interpolate(a, b, d), q);
        }
    }
    // Endpoints exactly, so that a query on a shared waypoint ties.
    double best = (lo + hi) / 2.0;
    double best_d = space.distance(space.interpolate(a, b, best), q);
    for (double t : {0.0, 1.0})
    {
        double dt = space.distance(space.interpolate(a, b, t), q);
        if (dt <= best_d)
        {
            best = t;
            best_d = dt;
        }
    }
    return best;
}

}  // namespace

Path clip_path(const StateSpace& base, const Path& path, const State& b)
{
    if (path.waypoints.size() < 2)
        return Path{{b, path.waypoints.empty() ? b : path.waypoints.back()}, {}};
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i)
    {
        const State& a = path.waypoints[i];
        const State& c = path.waypoints[i + 1];
        double t = closest_parameter(base, a, c, b);
        double d = base.distance(base.interpolate(a, c, t), b);
        if (d <= best_distance)
        {
            best_distance = d;
            best = i;
        }
    }
    Path out;
    out.waypoints.push_back(b);
    out.waypoints.insert(out.waypoints.end(), path.waypoints.begin() + static_cast<std::ptrdiff_t>(best) + 1,
                         path.waypoints.end());
    return out;
}

SectionResult BundlePlanner::find_section(std::size_t k)
{
    if (k == 0 || k >= levels_.size())
        return {};
    const Level& base = *levels_[k - 1];
    if (!base.solution)
        return {};
    const Path base_path = *base.solution;
    const VertexId root = levels_[k]->start_vertex;
    SectionResult r = find_section_recursive(k, base_path, root, 0, SectionFlavor::FiberFirst);
    if (!r.success && !level_terminated(k))
        r = find_section_recursive(k, base_path, root, 0, SectionFlavor::FiberLast);
    return r;
}

SectionResult BundlePlanner::find_section_recursive(std::size_t k, const Path& base_path, VertexId from,
                                                    std::size_t depth, SectionFlavor flavor)
{
    SectionResult result;
    result.depth = depth;
    if (depth >= config_.section_depth)
        return result;
    Level& level = *levels_[k];
    const Bundle& bundle = *level.bundle;
    const State x_a = level.graph.state(from);
    const State goal_fiber = bundle.project_fiber(level.goal.center);
    const State x_b = bundle.lift(base_path.waypoints.back(), goal_fiber);
    const Path section = section_l1(bundle, base_path, x_a, x_b, flavor);

    // Walk the section while valid, adding every reached waypoint.
    VertexId last = from;
    State last_state = x_a;
    bool blocked = false;
    State probe;
    for (std::size_t i = 1; i < section.waypoints.size() && !blocked; ++i)
    {
        const State& a = section.waypoints[i - 1];
        const State& b = section.waypoints[i];
        const double len = level.space->distance(a, b);
        const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / level.resolution)));
        std::size_t reached = steps;
        for (std::size_t s = 1; s <= steps; ++s)
        {
            level.space->interpolate(a, b, static_cast<double>(s) / static_cast<double>(steps), probe);
            if (!level.valid(probe))
            {
                reached = s - 1;
                blocked = true;
                break;
            }
        }
        State stop = reached == steps ? b : level.space->interpolate(a, b, static_cast<double>(reached) /
                                                                               static_cast<double>(steps));
        if (level.space->distance(last_state, stop) > 0.0)
        {
            last = level.extend(last, stop);
            last_state = stop;
        }
    }
    if (!blocked && level.in_goal(last_state))
    {
        result.success = true;
        return result;
    }

    const State b_last = bundle.project(last_state);
    for (std::size_t j = 0; j < config_.section_sidesteps; ++j)
    {
        if (timed_out())
            break;
        State f = bundle.fiber().sample_uniform(rng_);
        State x_s = bundle.lift(b_last, f);
        if (!level.valid(x_s) || !level.check_motion(last_state, x_s))
            continue;
        VertexId v = level.extend(last, x_s);
        ++result.sidesteps;
        Path rest = clip_path(bundle.base(), base_path, b_last);
        SectionFlavor next = flavor == SectionFlavor::FiberFirst ? SectionFlavor::FiberLast : SectionFlavor::FiberFirst;
        SectionResult sub = find_section_recursive(k, rest, v, depth + 1, next);
        sub.sidesteps += result.sidesteps;
        if (sub.success)
            return sub;
        result.sidesteps = sub.sidesteps;
        result.depth = std::max(result.depth, sub.depth);
    }
    return result;
}

}  // namespace fiberplan
