#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fiberplan/planners.hpp"

using namespace fiberplan;

namespace {

PlannerConfig config_for(PlannerName name, std::uint64_t seed = 0)
{
    PlannerConfig c;
    c.planner = name;
    c.seed = seed;
    c.time_limit = 30.0;
    return c;
}

// Every segment of the path is collision free and it joins start to goal.
void check_path(const PlanningProblem& p, const PlannerConfig& c, const Path& path)
{
    const StateSpace& top = p.space(p.levels() - 1);
    REQUIRE(path.waypoints.size() >= 2);
    CHECK(path.waypoints.front() == p.start);
    CHECK(top.distance(path.waypoints.back(), p.goal.center) <= p.goal.radius);
    const double res = c.resolution_factor * top.max_extent();
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i)
        CHECK(check_motion(top, p.validity.back(), path.waypoints[i], path.waypoints[i + 1], res));
}

}  // namespace

TEST_CASE("planner names round trip")
{
    for (auto n : {PlannerName::QRRT, PlannerName::QRRTStar, PlannerName::QMP, PlannerName::QMPStar, PlannerName::RRT,
                   PlannerName::RRTStar, PlannerName::PRM, PlannerName::PRMStar})
        CHECK(parse_planner_name(planner_name(n)) == n);
    CHECK_THROWS_AS(parse_planner_name("xyz"), std::invalid_argument);
    CHECK(algorithm_of(PlannerName::PRMStar) == Algorithm::QMPStar);
    CHECK(is_baseline(PlannerName::RRT));
    CHECK_FALSE(is_baseline(PlannerName::QMP));
    CHECK(default_k_constant(2) == doctest::Approx(2 * std::exp(1.0) * 1.5));
}

TEST_CASE("planner config validation")
{
    PlannerConfig c;
    CHECK_NOTHROW(c.validate());
    auto field_of = [](PlannerConfig bad) -> std::string {
        try
        {
            bad.validate();
        }
        catch (const std::invalid_argument& e)
        {
            std::string msg = e.what();
            return msg.substr(0, msg.find(' '));
        }
        return "";
    };
    PlannerConfig bad = c;
    bad.range_factor = 0;
    CHECK(field_of(bad) == "range_factor");
    bad = c;
    bad.goal_bias = 1.5;
    CHECK(field_of(bad) == "goal_bias");
    bad = c;
    bad.time_limit = -1;
    CHECK(field_of(bad) == "time_limit");
    bad = c;
    bad.infeasibility_window = 0;
    CHECK(field_of(bad) == "infeasibility_window");
    bad = c;
    bad.sampler.beta_fixed = 2;
    CHECK(field_of(bad) == "beta_fixed");
}

TEST_CASE("motion checks include both endpoints")
{
    StateSpace s = StateSpace::unit_cube(2);
    ValidityFn not_origin = [](const State& x) { return x[0] > 0.0 || x[1] > 0.0; };
    CHECK_FALSE(check_motion(s, not_origin, State{0, 0}, State{1, 1}, 0.1));
    CHECK_FALSE(check_motion(s, not_origin, State{1, 1}, State{0, 0}, 0.1));
    CHECK(check_motion(s, not_origin, State{0.5, 0}, State{1, 1}, 0.1));
}

TEST_CASE("rewire moves a vertex below a cheaper parent")
{
    StateSpace s = StateSpace::unit_cube(2);
    PlannerConfig c;
    Level level(0, &s, nullptr, [](const State&) { return true; }, LevelGraph::Mode::Tree, State{0, 0},
                GoalRegion{State{1, 1}, 0.0}, c);
    LevelGraph& g = level.graph;
    VertexId a = level.extend(0, State{1, 0});
    VertexId b = level.extend(a, State{1, 1});
    CHECK(g.cost_to_come(b) == doctest::Approx(2.0));
    CHECK(level.refresh_solution());
    CHECK(level.best_cost == doctest::Approx(2.0));

    CHECK_FALSE(rewire(level, a, b));  // already the parent, no gain
    CHECK_FALSE(rewire(level, b, a));  // b hangs below a
    CHECK(rewire(level, 0, b));
    CHECK(g.parent(b) == 0u);
    CHECK(g.cost_to_come(b) == doctest::Approx(std::sqrt(2.0)));
    CHECK(level.refresh_solution());
    CHECK(level.best_cost == doctest::Approx(std::sqrt(2.0)));
    CHECK(level.solution->waypoints.size() == 2);
}

TEST_CASE("rewire respects blocked motions")
{
    StateSpace s = StateSpace::unit_cube(2);
    PlannerConfig c;
    ValidityFn wall = [](const State& x) { return !(x[0] > 0.4 && x[0] < 0.6 && x[1] > 0.4 && x[1] < 0.6); };
    Level level(0, &s, nullptr, wall, LevelGraph::Mode::Tree, State{0, 0}, GoalRegion{State{1, 1}, 0.0}, c);
    VertexId a = level.extend(0, State{1, 0});
    VertexId b = level.extend(a, State{1, 1});
    CHECK_FALSE(rewire(level, 0, b));
    CHECK(level.graph.parent(b) == a);
}

TEST_CASE("coverage monitor counts unseen samples")
{
    StateSpace s({Component::box(2, 0.0, 10.0)});
    ValidityFn wall = [](const State& x) { return x[0] < 4.5 || x[0] > 5.5; };
    CoverageMonitor m(&s, wall, 0.01, State{1, 5}, State{9, 5});
    CHECK(m.guards() == 2);
    m.observe(State{5, 5});
    CHECK(m.counter() == 1);
    m.observe(State{2, 2});  // seen by the start guard only
    CHECK(m.counter() == 2);
    m.observe(State{4.4, 0.1});
    CHECK(m.guards() == 2);
    CHECK_FALSE(m.start_goal_connected());

    ValidityFn open = [](const State&) { return true; };
    CoverageMonitor free(&s, open, 0.01, State{1, 5}, State{9, 5});
    free.observe(State{5, 5});
    CHECK(free.start_goal_connected());
    CHECK(free.counter() == 0);
}

TEST_CASE("every planner solves a small hypercube")
{
    PlanningProblem p = hypercube_problem(3);
    for (auto name : {PlannerName::QRRT, PlannerName::QRRTStar, PlannerName::QMP, PlannerName::QMPStar,
                      PlannerName::RRT, PlannerName::PRM})
    {
        CAPTURE(planner_name(name));
        PlannerConfig c = config_for(name, 3);
        PlanOutcome out = plan(p, c);
        REQUIRE(out.status == PlanStatus::Solved);
        REQUIRE(out.path.has_value());
        check_path(p, c, *out.path);
        CHECK(out.cost == doctest::Approx(path_length(p.space(p.levels() - 1), *out.path)));
        CHECK(out.vertices_per_level.size() == (is_baseline(name) ? 1u : 2u));
    }
}

TEST_CASE("hypercube with many levels is solved by the multilevel planners")
{
    PlanningProblem p = hypercube_problem(20);
    for (auto name : {PlannerName::QRRT, PlannerName::QMP})
    {
        PlannerConfig c = config_for(name, 1);
        PlanOutcome out = plan(p, c);
        REQUIRE(out.status == PlanStatus::Solved);
        check_path(p, c, *out.path);
        CHECK(out.vertices_per_level.size() == 19);
    }
}

TEST_CASE("single-level problems reduce to the baselines")
{
    PlanningProblem p = wall_gap_problem(1.2);
    PlanningProblem flat = p.single_level();
    const std::pair<PlannerName, PlannerName> pairs[] = {{PlannerName::QRRT, PlannerName::RRT},
                                                         {PlannerName::QMP, PlannerName::PRM},
                                                         {PlannerName::QRRTStar, PlannerName::RRTStar},
                                                         {PlannerName::QMPStar, PlannerName::PRMStar}};
    for (auto [multi, base] : pairs)
        for (std::uint64_t seed : {0u, 1u})
        {
            PlannerConfig a = config_for(multi, seed), b = config_for(base, seed);
            a.level_budget = b.level_budget = 300;
            a.optimize = b.optimize = true;
            PlanOutcome x = plan(flat, a), y = plan(p, b);
            CHECK(x.status == y.status);
            CHECK(x.cost_trace == y.cost_trace);
            CHECK(x.vertices_per_level == y.vertices_per_level);
            REQUIRE(x.path.has_value() == y.path.has_value());
            if (x.path)
                CHECK(x.path->waypoints == y.path->waypoints);
        }
}

TEST_CASE("runs are reproducible for a fixed seed")
{
    PlanningProblem p = disk_crossing_problem(3);
    PlannerConfig c = config_for(PlannerName::QRRT, 11);
    PlanOutcome a = plan(p, c), b = plan(p, c);
    REQUIRE(a.status == PlanStatus::Solved);
    CHECK(a.path->waypoints == b.path->waypoints);
    CHECK(a.vertices_per_level == b.vertices_per_level);
}

TEST_CASE("closed wall gap is reported infeasible")
{
    PlanningProblem p = wall_gap_problem(0.8);
    for (auto name : {PlannerName::QRRT, PlannerName::QMP})
    {
        PlannerConfig c = config_for(name, 2);
        c.infeasibility_window = 1000;
        PlanOutcome out = plan(p, c);
        CHECK(out.status == PlanStatus::Infeasible);
        CHECK(out.confidence == doctest::Approx(0.999));
        CHECK_FALSE(out.path.has_value());
    }
}

TEST_CASE("infeasible projected start")
{
    PlanningProblem p = wall_gap_problem(1.2);
    p.validity.front() = [](const State& x) { return x[0] > 2.0; };
    PlanOutcome out = plan(p, config_for(PlannerName::QRRT));
    CHECK(out.status == PlanStatus::Infeasible);
    CHECK(out.confidence == 1.0);
}

TEST_CASE("termination by budget and by time")
{
    PlanningProblem closed = wall_gap_problem(0.8);
    PlannerConfig c = config_for(PlannerName::QRRT);
    c.level_budget = 50;
    PlanOutcome out = plan(closed, c);
    CHECK(out.status == PlanStatus::TimedOut);
    CHECK(out.iterations_per_level.back() == 50);

    c.level_budget.reset();
    c.time_limit = 0.2;
    out = plan(closed, c);
    CHECK(out.status == PlanStatus::TimedOut);
    CHECK(out.time_s >= 0.2);
    CHECK(out.time_s < 2.0);
}

TEST_CASE("optimizing planners improve monotonically")
{
    PlanningProblem p = wall_gap_problem(1.2);
    for (auto name : {PlannerName::QRRTStar, PlannerName::QMPStar})
    {
        PlannerConfig c = config_for(name, 4);
        c.optimize = true;
        c.level_budget = 3000;
        PlanOutcome out = plan(p, c);
        REQUIRE(out.status == PlanStatus::Solved);
        REQUIRE_FALSE(out.cost_trace.empty());
        for (std::size_t i = 1; i < out.cost_trace.size(); ++i)
        {
            CHECK(out.cost_trace[i].second <= out.cost_trace[i - 1].second);
            CHECK(out.cost_trace[i].first >= out.cost_trace[i - 1].first);
        }
        CHECK(out.cost == out.cost_trace.back().second);
        CHECK(out.cost >= *p.optimal_cost - 1e-9);
        CHECK(out.cost < 1.3 * *p.optimal_cost);
        check_path(p, c, *out.path);
    }
}

TEST_CASE("tree cost-to-come stays consistent under rewiring")
{
    PlanningProblem p = wall_gap_problem(1.2);
    PlannerConfig c = config_for(PlannerName::RRTStar, 6);
    BundlePlanner planner(p.single_level(), c);
    Level& level = planner.enter_level(0);
    for (int i = 0; i < 1500; ++i)
        planner.grow(0);
    const LevelGraph& g = level.graph;
    for (VertexId v = 1; v < g.num_vertices(); ++v)
    {
        VertexId u = *g.parent(v);
        CHECK(g.cost_to_come(v) == doctest::Approx(g.cost_to_come(u) + g.space().distance(g.state(u), g.state(v))));
    }
}

TEST_CASE("quotient metric and alternative heuristics still solve")
{
    PlanningProblem p = hypercube_problem(6);
    for (MetricKind metric : {MetricKind::Intrinsic, MetricKind::QuotientSpace})
        for (ImportanceKind imp : {ImportanceKind::Uniform, ImportanceKind::Exponential, ImportanceKind::EpsilonGreedy})
            for (GraphSampling gs : {GraphSampling::RandomVertex, GraphSampling::RandomDegreeVertex,
                                     GraphSampling::Neighborhood})
            {
                PlannerConfig c = config_for(PlannerName::QRRT, 5);
                c.metric = metric;
                c.importance.kind = imp;
                c.sampler.strategy = gs;
                PlanOutcome out = plan(p, c);
                CHECK(out.status == PlanStatus::Solved);
            }
}

TEST_CASE("levels must be entered in order")
{
    BundlePlanner planner(hypercube_problem(4), config_for(PlannerName::QRRT));
    CHECK_THROWS_AS(planner.enter_level(1), std::logic_error);
    planner.enter_level(0);
    CHECK(planner.active_levels() == 1);
    CHECK(planner.level(0).space->dim() == 2);
}
