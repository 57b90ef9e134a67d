// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/planners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fiberplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform01(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::size_t star_neighbors(double constant, std::size_t n)
{
    if (n <= 1)
        return 0;
    auto k = static_cast<std::size_t>(std::ceil(constant * std::log(static_cast<double>(n))));
    return std::min(k, n - 1);
}

}  // namespace

Algorithm algorithm_of(PlannerName name)
{
    switch (name)
    {
        case PlannerName::QRRT:
        case PlannerName::RRT:
            return Algorithm::QRRT;
        case PlannerName::QRRTStar:
        case PlannerName::RRTStar:
            return Algorithm::QRRTStar;
        case PlannerName::QMP:
        case PlannerName::PRM:
            return Algorithm::QMP;
        case PlannerName::QMPStar:
        case PlannerName::PRMStar:
            return Algorithm::QMPStar;
    }
    return Algorithm::QRRT;
}

bool is_baseline(PlannerName name)
{
    return name == PlannerName::RRT || name == PlannerName::RRTStar || name == PlannerName::PRM ||
           name == PlannerName::PRMStar;
}

std::string planner_name(PlannerName name)
{
    switch (name)
    {
        case PlannerName::QRRT: return "qrrt";
        case PlannerName::QRRTStar: return "qrrtstar";
        case PlannerName::QMP: return "qmp";
        case PlannerName::QMPStar: return "qmpstar";
        case PlannerName::RRT: return "rrt";
        case PlannerName::RRTStar: return "rrtstar";
        case PlannerName::PRM: return "prm";
        case PlannerName::PRMStar: return "prmstar";
    }
    return "?";
}

PlannerName parse_planner_name(const std::string& name)
{
    for (auto p : {PlannerName::QRRT, PlannerName::QRRTStar, PlannerName::QMP, PlannerName::QMPStar, PlannerName::RRT,
                   PlannerName::RRTStar, PlannerName::PRM, PlannerName::PRMStar})
        if (planner_name(p) == name)
            return p;
    throw std::invalid_argument("unknown planner '" + name + "'");
}

double default_k_constant(std::size_t dim)
{
    return 2.0 * std::numbers::e * (1.0 + 1.0 / static_cast<double>(dim));
}

void PlannerConfig::validate() const
{
    if (!(range_factor > 0.0))
        throw std::invalid_argument("range_factor must be positive");
    if (!(resolution_factor > 0.0))
        throw std::invalid_argument("resolution_factor must be positive");
    if (k_prm && !(*k_prm > 0.0))
        throw std::invalid_argument("k_prm must be positive");
    if (k_rrt && !(*k_rrt > 0.0))
        throw std::invalid_argument("k_rrt must be positive");
    if (qmp_neighbors < 1)
        throw std::invalid_argument("qmp_neighbors must be at least 1");
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0))
        throw std::invalid_argument("goal_bias must lie in [0, 1]");
    if (!(time_limit > 0.0))
        throw std::invalid_argument("time_limit must be positive");
    if (level_budget && *level_budget < 1)
        throw std::invalid_argument("level_budget must be at least 1");
    if (infeasibility_window && *infeasibility_window < 1)
        throw std::invalid_argument("infeasibility_window must be at least 1");
    if (trace_interval < 1)
        throw std::invalid_argument("trace_interval must be at least 1");
    sampler.validate();
    importance.validate();
}

bool check_motion(const StateSpace& space, const ValidityFn& valid, const State& x, const State& y,
                  double resolution)
{
    return segment_valid(space, valid, x, y, resolution);
}

// Coverage monitor

CoverageMonitor::CoverageMonitor(const StateSpace* space, ValidityFn valid, double resolution, State start,
                                 State goal)
    : space_(space), valid_(std::move(valid)), resolution_(resolution)
{
    guards_.push_back(std::move(start));
    guards_.push_back(std::move(goal));
    component_ = {0, 1};
}

std::size_t CoverageMonitor::find(std::size_t i) const
{
    while (component_[i] != i)
    {
        component_[i] = component_[component_[i]];
        i = component_[i];
    }
    return i;
}

bool CoverageMonitor::start_goal_connected() const
{
    return find(0) == find(1);
}

void CoverageMonitor::observe(const State& x)
{
    if (!valid_(x))
    {
        ++counter_;
        return;
    }
    std::vector<std::size_t> seen;
    for (std::size_t g = 0; g < guards_.size(); ++g)
    {
        std::size_t c = find(g);
        if (std::find(seen.begin(), seen.end(), c) != seen.end())
            continue;
        if (check_motion(*space_, valid_, guards_[g], x, resolution_))
            seen.push_back(c);
    }
    if (seen.empty())
    {
        guards_.push_back(x);
        component_.push_back(component_.size());
        counter_ = 0;
    }
    else if (seen.size() >= 2)
    {
        std::size_t root = *std::min_element(seen.begin(), seen.end());
        for (std::size_t c : seen)
            component_[c] = root;
        counter_ = 0;
    }
    else
    {
        ++counter_;
    }
}

// Level

Level::Level(std::size_t index_, const StateSpace* space_, const Bundle* bundle_, ValidityFn valid_,
             LevelGraph::Mode mode, State start_, GoalRegion goal_, const PlannerConfig& config)
    : index(index_),
      space(space_),
      bundle(bundle_),
      valid(std::move(valid_)),
      graph(space_, mode),
      start(std::move(start_)),
      goal(std::move(goal_)),
      range(config.range_factor * space_->max_extent()),
      resolution(config.resolution_factor * space_->max_extent())
{
    start_vertex = graph.add_vertex(start);
    if (mode == LevelGraph::Mode::Roadmap)
    {
        if (in_goal(start))
            goal_vertex = start_vertex;
        else
            goal_vertex = graph.add_vertex(goal.center);
    }
    else if (in_goal(start))
    {
        goal_vertices.push_back(start_vertex);
    }
    if (config.infeasibility_window)
        monitor.emplace(space, valid, resolution, start, goal.center);
    refresh_solution();
}

bool Level::check_motion(const State& x, const State& y) const
{
    return fiberplan::check_motion(*space, valid, x, y, resolution);
}

bool Level::in_goal(const State& x) const
{
    return space->distance(x, goal.center) <= goal.radius;
}

VertexId Level::extend(VertexId from, const State& s)
{
    const double c = space->distance(graph.state(from), s);
    if (graph.mode() == LevelGraph::Mode::Tree)
    {
        VertexId v = graph.add_child(from, s, c);
        if (in_goal(s))
            goal_vertices.push_back(v);
        return v;
    }
    if (goal_vertex && s == graph.state(*goal_vertex))
    {
        graph.add_edge(from, *goal_vertex, c);
        return *goal_vertex;
    }
    VertexId v = graph.add_vertex(s);
    graph.add_edge(from, v, c);
    return v;
}

bool Level::refresh_solution()
{
    last_refresh = iterations;
    if (graph.mode() == LevelGraph::Mode::Tree)
    {
        std::optional<VertexId> best;
        double cost = kInf;
        for (VertexId g : goal_vertices)
            if (graph.cost_to_come(g) < cost)
            {
                cost = graph.cost_to_come(g);
                best = g;
            }
        if (!best || (solution && !(cost < best_cost)))
            return false;
        Path p;
        for (VertexId v : graph.tree_path(*best))
            p.waypoints.push_back(graph.state(v));
        solution = std::move(p);
        best_cost = cost;
        return true;
    }
    if (!goal_vertex || !graph.connected(start_vertex, *goal_vertex))
        return false;
    auto gp = graph.shortest_path(start_vertex, *goal_vertex);
    if (!gp || (solution && !(gp->cost < best_cost)))
        return false;
    Path p;
    for (VertexId v : gp->vertices)
        p.waypoints.push_back(graph.state(v));
    if (p.waypoints.size() == 1)
        p.waypoints.push_back(p.waypoints.front());
    solution = std::move(p);
    best_cost = gp->cost;
    return true;
}

bool rewire(Level& level, VertexId x, VertexId y)
{
    LevelGraph& g = level.graph;
    if (x == y)
        return false;
    const double c = level.space->distance(g.state(x), g.state(y));
    if (!(g.cost_to_come(x) + c < g.cost_to_come(y)))
        return false;
    if (g.is_ancestor(y, x) || !level.check_motion(g.state(x), g.state(y)))
        return false;
    g.reparent(y, x, c);
    return true;
}

std::string status_name(PlanStatus s)
{
    switch (s)
    {
        case PlanStatus::Solved: return "solved";
        case PlanStatus::TimedOut: return "timeout";
        case PlanStatus::Infeasible: return "infeasible";
        case PlanStatus::Error: return "error";
    }
    return "?";
}

// Planner

BundlePlanner::BundlePlanner(PlanningProblem problem, PlannerConfig config)
    : problem_(std::move(problem)), config_(std::move(config)), algorithm_(algorithm_of(config_.planner)),
      rng_(config_.seed)
{
    config_.validate();
    if (problem_.validity.size() != problem_.levels())
        throw std::invalid_argument("problem needs one validity function per level");
    started_ = std::chrono::steady_clock::now();
}

Level& BundlePlanner::enter_level(std::size_t k)
{
    if (k != levels_.size() || k >= problem_.levels())
        throw std::logic_error("levels must be entered in order");
    const auto& seq = problem_.sequence;
    State start = seq.project_to(k, problem_.start);
    GoalRegion goal{seq.project_to(k, problem_.goal.center), problem_.goal.radius};
    const Bundle* bundle = k > 0 ? &seq.bundle_below(k) : nullptr;
    auto mode = (algorithm_ == Algorithm::QMP || algorithm_ == Algorithm::QMPStar) ? LevelGraph::Mode::Roadmap
                                                                                     : LevelGraph::Mode::Tree;
    levels_.push_back(std::make_unique<Level>(k, &seq.space(k), bundle, problem_.validity[k], mode, std::move(start),
                                              std::move(goal), config_));
    note_cost(k);
    return *levels_.back();
}

State BundlePlanner::sample(Level& level)
{
    const Level* base = level.index > 0 ? levels_[level.index - 1].get() : nullptr;
    const Path* base_solution = base && base->solution ? &*base->solution : nullptr;
    return restriction_sample(*level.space, level.bundle, config_.sampler, base ? &base->graph : nullptr,
                              base_solution, static_cast<double>(level.iterations), rng_);
}

std::vector<Neighbor> BundlePlanner::nearest(const Level& level, const State& x, std::size_t k,
                                             VertexId exclude) const
{
    if (k == 0)
        return {};
    if (config_.metric == MetricKind::Intrinsic || level.bundle == nullptr)
        return level.graph.index().k_nearest(x, k, exclude);
    const LevelGraph& base = levels_[level.index - 1]->graph;
    QuotientMetric metric(*level.bundle, base);
    auto anchor = metric.anchor(x);
    std::vector<Neighbor> all;
    all.reserve(level.graph.num_vertices());
    for (VertexId v = 0; v < level.graph.num_vertices(); ++v)
        if (v != exclude)
            all.push_back({v, metric.from_anchor(anchor, level.graph.state(v))});
    auto order = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    };
    k = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), order);
    all.resize(k);
    return all;
}

std::optional<VertexId> BundlePlanner::grow_qrrt(Level& level)
{
    ++level.iterations;
    State x_rand;
    if (uniform01(rng_) < config_.goal_bias)
    {
        x_rand = level.goal.center;
    }
    else
    {
        x_rand = sample(level);
        if (level.monitor)
            level.monitor->observe(x_rand);
    }
    auto near = nearest(level, x_rand, 1, static_cast<VertexId>(-1));
    const VertexId v_near = near.front().id;
    const State& x_near = level.graph.state(v_near);
    const double d = level.space->distance(x_near, x_rand);
    if (d == 0.0)
        return std::nullopt;
    State x_new = d > level.range ? level.space->interpolate(x_near, x_rand, level.range / d) : x_rand;
    if (!level.check_motion(x_near, x_new))
        return std::nullopt;
    return level.extend(v_near, x_new);
}

void BundlePlanner::grow_qrrt_star(Level& level)
{
    auto v = grow_qrrt(level);
    if (!v)
        return;
    const std::size_t n = level.graph.num_vertices();
    const double constant = config_.k_rrt.value_or(default_k_constant(level.space->dim()));
    auto nbh = nearest(level, level.graph.state(*v), star_neighbors(constant, n), *v);
    for (const Neighbor& u : nbh)
        rewire(level, u.id, *v);
    for (const Neighbor& u : nbh)
        rewire(level, *v, u.id);
}

void BundlePlanner::grow_qmp(Level& level)
{
    ++level.iterations;
    State x = sample(level);
    if (level.monitor)
        level.monitor->observe(x);
    if (!level.valid(x))
        return;
    VertexId v = level.graph.add_vertex(x);
    const std::size_t n = level.graph.num_vertices();
    std::size_t k = config_.qmp_neighbors;
    if (algorithm_ == Algorithm::QMPStar)
        k = star_neighbors(config_.k_prm.value_or(default_k_constant(level.space->dim())), n);
    for (const Neighbor& u : nearest(level, x, k, v))
    {
        const State& xu = level.graph.state(u.id);
        if (!level.graph.has_edge(u.id, v) && level.check_motion(xu, x))
            level.graph.add_edge(u.id, v, level.space->distance(xu, x));
    }
}

void BundlePlanner::grow(std::size_t k)
{
    Level& level = *levels_[k];
    switch (algorithm_)
    {
        case Algorithm::QRRT:
            grow_qrrt(level);
            break;
        case Algorithm::QRRTStar:
            grow_qrrt_star(level);
            break;
        case Algorithm::QMP:
        case Algorithm::QMPStar:
            grow_qmp(level);
            break;
    }
    if (level.graph.mode() == LevelGraph::Mode::Tree)
    {
        if (level.refresh_solution())
            note_cost(k);
    }
    else if (!level.solution ? level.graph.connected(level.start_vertex, *level.goal_vertex)
                             : level.iterations - level.last_refresh >= config_.trace_interval)
    {
        if (level.refresh_solution())
            note_cost(k);
    }
    check_infeasible(k);
}

void BundlePlanner::note_cost(std::size_t k)
{
    if (top(k) && levels_[k]->solution)
        trace_.emplace_back(levels_[k]->iterations, levels_[k]->best_cost);
}

void BundlePlanner::check_infeasible(std::size_t k)
{
    const Level& level = *levels_[k];
    if (level.monitor && !level.solution && level.monitor->counter() >= *config_.infeasibility_window &&
        !level.monitor->start_goal_connected())
        infeasible_ = true;
}

bool BundlePlanner::timed_out() const
{
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started_;
    return elapsed.count() >= config_.time_limit;
}

bool BundlePlanner::level_terminated(std::size_t k) const
{
    const Level& level = *levels_[k];
    if (infeasible_ || timed_out())
        return true;
    if (level.solution && !(top(k) && config_.optimize))
        return true;
    return config_.level_budget && level.iterations >= *config_.level_budget;
}

PlanOutcome BundlePlanner::solve()
{
    started_ = std::chrono::steady_clock::now();
    PlanOutcome out;
    auto finish = [&](PlanStatus status) {
        out.status = status;
        out.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        for (const auto& l : levels_)
        {
            out.vertices_per_level.push_back(l->graph.num_vertices());
            out.iterations_per_level.push_back(l->iterations);
        }
        out.cost_trace = trace_;
        if (status == PlanStatus::Infeasible)
        {
            out.confidence = 1.0 - 1.0 / static_cast<double>(config_.infeasibility_window.value_or(1));
        }
        return out;
    };

    const std::size_t K = problem_.levels();
    for (std::size_t k = 0; k < K; ++k)
    {
        State projected = problem_.sequence.project_to(k, problem_.start);
        if (!problem_.validity[k](projected))
        {
            out.message = "projected start infeasible on level " + std::to_string(k + 1);
            PlanOutcome o = finish(PlanStatus::Infeasible);
            o.confidence = 1.0;
            return o;
        }
        enter_level(k);
        if (config_.find_section && k > 0)
        {
            if (find_section(k).success)
                levels_[k]->refresh_solution(), note_cost(k);
        }
        while (!level_terminated(k))
        {
            std::size_t best = 0;
            double best_importance = -1.0;
            for (std::size_t j = 0; j <= k; ++j)
            {
                double imp = importance(config_.importance, j + 1, K, levels_[j]->graph.num_vertices(),
                                        levels_[j]->space->dim());
                if (imp > best_importance)
                {
                    best_importance = imp;
                    best = j;
                }
            }
            grow(best);
        }
        if (infeasible_)
        {
            out.message = "coverage exhausted without connecting start and goal";
            return finish(PlanStatus::Infeasible);
        }
        if (timed_out() && !(top(k) && levels_[k]->solution))
            return finish(PlanStatus::TimedOut);
    }
    Level& last = *levels_.back();
    if (!last.solution)
        return finish(PlanStatus::TimedOut);
    if (last.refresh_solution())
        note_cost(K - 1);
    out.path = last.solution;
    out.cost = last.best_cost;
    return finish(PlanStatus::Solved);
}

PlanOutcome plan(const PlanningProblem& problem, const PlannerConfig& config)
{
    BundlePlanner planner(is_baseline(config.planner) ? problem.single_level() : problem, config);
    return planner.solve();
}

}  // namespace fiberplan
