// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fiberplan/bench.hpp"
#include "fiberplan/bundles.hpp"
#include "fiberplan/environments.hpp"
#include "fiberplan/heuristics.hpp"
#include "fiberplan/planners.hpp"
#include "fiberplan/samplers.hpp"

using namespace fiberplan;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double mean(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

PlannerConfig planner_config(PlannerName name, std::uint64_t seed, double limit = 60.0)
{
    PlannerConfig c;
    c.planner = name;
    c.seed = seed;
    c.time_limit = limit;
    return c;
}

// Runs shared by criteria 1 and 2.
struct HypercubeRuns {
    std::vector<double> qrrt, qmp, rrt;
    std::size_t qrrt_solved = 0, qmp_solved = 0, rrt_solved = 0;
    bool done = false;
};

HypercubeRuns& hypercube_runs()
{
    static HypercubeRuns h;
    if (h.done)
        return h;
    PlanningProblem p = hypercube_problem(100);
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        RunRecord a = run_once(p, "hypercube(n=100)", planner_config(PlannerName::QRRT, seed), seed, seed, 60.0);
        RunRecord b = run_once(p, "hypercube(n=100)", planner_config(PlannerName::QMP, seed), seed, seed, 60.0);
        RunRecord c = run_once(p, "hypercube(n=100)", planner_config(PlannerName::RRT, seed), seed, seed, 60.0);
        h.qrrt.push_back(a.time_s);
        h.qmp.push_back(b.time_s);
        h.rrt.push_back(c.time_s);
        h.qrrt_solved += a.status == PlanStatus::Solved;
        h.qmp_solved += b.status == PlanStatus::Solved;
        h.rrt_solved += c.status == PlanStatus::Solved;
    }
    h.done = true;
    return h;
}

Verdict criterion1()
{
    HypercubeRuns& h = hypercube_runs();
    bool pass = h.qrrt_solved == 10 && h.qmp_solved == 10 && mean(h.qrrt) <= 5.0 && mean(h.qmp) <= 5.0 &&
                h.rrt_solved == 0;
    return {pass, fmt("qrrt %zu/10 mean %.4fs, qmp %zu/10 mean %.4fs, rrt %zu/10 within 60s", h.qrrt_solved,
                      mean(h.qrrt), h.qmp_solved, mean(h.qmp), h.rrt_solved)};
}

Verdict criterion2()
{
    PlannerConfig rrt = planner_config(PlannerName::RRT, 0);
    ScalingResult s = scaling_study(rrt, {3, 4, 5, 6, 7}, 10, 60.0, 0, false);
    bool increasing = true;
    std::string means;
    for (std::size_t i = 0; i < s.points.size(); ++i)
    {
        means += fmt("%s%zu:%.4g", i ? " " : "", s.points[i].n, s.points[i].mean_time);
        if (i > 0 && !(s.points[i].mean_time > s.points[i - 1].mean_time))
            increasing = false;
    }
    const double extrapolated = s.fit.evaluate(100.0);
    const double qrrt = mean(hypercube_runs().qrrt);
    const bool faster = qrrt > 0.0 && extrapolated >= 100.0 * qrrt;
    return {increasing && faster, fmt("rrt means [%s]%s; cubic(100) = %.4g s, qrrt(100) = %.4g s, ratio %.3g",
                                      means.c_str(), increasing ? " increasing" : " not increasing", extrapolated,
                                      qrrt, qrrt > 0 ? extrapolated / qrrt : 0.0)};
}

Verdict criterion3()
{
    Bundle b(StateSpace::unit_cube(2), ProjectionSpec{{{ProjectionTag::RNPrefix, 1}}, false});
    LevelGraph base(&b.base(), LevelGraph::Mode::Roadmap);
    Rng rng(3);
    // Dense base roadmap: 200 random vertices on [0,1] chained in order.
    std::vector<double> xs{0.0, 1.0};
    for (int i = 0; i < 198; ++i)
        xs.push_back(b.base().sample_uniform(rng)[0]);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        base.add_vertex(State{xs[i]});
        if (i > 0)
            base.add_edge(i - 1, i, xs[i] - xs[i - 1]);
    }
    SamplerConfig config;
    Path base_solution{{State{0.0}, State{1.0}}, {}};
    std::vector<char> hit(400, 0);
    for (int i = 0; i < 100000; ++i)
    {
        State x = restriction_sample(b.total(), &b, config, &base, &base_solution, i, rng);
        int cx = std::min(19, static_cast<int>(x[0] * 20)), cy = std::min(19, static_cast<int>(x[1] * 20));
        hit[static_cast<std::size_t>(cx * 20 + cy)] = 1;
    }
    const double coverage = std::accumulate(hit.begin(), hit.end(), 0) / 400.0;
    return {coverage >= 0.99, fmt("%.2f%% of 400 cells hit after 1e5 samples", 100 * coverage)};
}

Verdict criterion4()
{
    std::vector<EnvironmentSpec> specs{EnvironmentSpec{.name = "hypercube", .n = 100},
                                       EnvironmentSpec{.name = "hypercube", .n = 20},
                                       EnvironmentSpec{.name = "wall_gap", .gap_width = 1.2},
                                       EnvironmentSpec{.name = "wall_gap", .gap_width = 0.8},
                                       EnvironmentSpec{.name = "disk_crossing", .robots = 4}};
    std::size_t bundles = 0, violations = 0;
    Rng rng(4);
    for (const EnvironmentSpec& spec : specs)
    {
        PlanningProblem p = make_problem(spec);
        for (std::size_t k = 1; k < p.levels(); ++k)
        {
            violations += check_admissible(p.sequence.bundle_below(k), p.validity[k], p.validity[k - 1], 10000, rng);
            ++bundles;
        }
    }
    return {violations == 0, fmt("%zu violations over %zu bundles x 1e4 samples", violations, bundles)};
}

Verdict criterion5()
{
    PlanningProblem p = wall_gap_problem(1.2);
    const double optimum = *p.optimal_cost;
    std::string detail = fmt("optimum %.4f;", optimum);
    bool pass = true;
    for (PlannerName name : {PlannerName::QRRTStar, PlannerName::QMPStar})
    {
        std::size_t close = 0, monotone = 0;
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            PlannerConfig c = planner_config(name, seed, 600.0);
            c.optimize = true;
            c.level_budget = 100000;
            PlanOutcome out = plan(p, c);
            if (out.status == PlanStatus::Solved && out.cost <= 1.05 * optimum)
                ++close;
            if (out.status == PlanStatus::Solved)
                worst = std::max(worst, out.cost / optimum);
            bool mono = !out.cost_trace.empty();
            for (std::size_t i = 1; i < out.cost_trace.size(); ++i)
                mono = mono && out.cost_trace[i].second <= out.cost_trace[i - 1].second;
            monotone += mono;
        }
        pass = pass && close >= 9 && monotone == 10;
        detail += fmt(" %s %zu/10 within 5%% (worst ratio %.4f), %zu/10 monotone;", planner_name(name).c_str(), close,
                      worst, monotone);
    }
    return {pass, detail};
}

Verdict criterion6()
{
    // Frozen instance: 60 points in the unit square around a central block.
    StateSpace s = StateSpace::unit_cube(2);
    ValidityFn valid = [](const State& x) { return !(x[0] > 0.35 && x[0] < 0.65 && x[1] > 0.3 && x[1] < 0.7); };
    PlannerConfig c;
    Rng rng(6);
    std::vector<State> pts{State{0.05, 0.5}};
    while (pts.size() < 60)
    {
        State x = s.sample_uniform(rng);
        if (valid(x))
            pts.push_back(x);
    }
    const double radius = 0.3;
    Level level(0, &s, nullptr, valid, LevelGraph::Mode::Tree, pts[0], GoalRegion{pts[0], 0.0}, c);

    // Candidate edges: pairs within the radius joined by a valid motion.
    const std::size_t n = pts.size();
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
        {
            double d = s.distance(pts[i], pts[j]);
            if (d <= radius && level.check_motion(pts[i], pts[j]))
            {
                adj[i].push_back({j, d});
                adj[j].push_back({i, d});
            }
        }

    // Initial tree: breadth-first over the candidate edges (far from optimal).
    std::vector<VertexId> id(n, static_cast<VertexId>(-1));
    std::vector<std::size_t> point_of{0};
    id[0] = level.start_vertex;
    std::queue<std::size_t> bfs;
    bfs.push(0);
    while (!bfs.empty())
    {
        std::size_t u = bfs.front();
        bfs.pop();
        for (auto [v, d] : adj[u])
            if (id[v] == static_cast<VertexId>(-1))
            {
                id[v] = level.extend(id[u], pts[v]);
                point_of.push_back(v);
                bfs.push(v);
            }
    }

    // Exhaustive rewiring over the candidate edges until a fixed point.
    bool changed = true;
    std::size_t sweeps = 0;
    while (changed && sweeps < 1000)
    {
        changed = false;
        ++sweeps;
        for (std::size_t u = 0; u < n; ++u)
            for (auto [v, d] : adj[u])
                if (id[u] != static_cast<VertexId>(-1) && id[v] != static_cast<VertexId>(-1))
                    changed = rewire(level, id[u], id[v]) || changed;
    }

    // Dijkstra oracle on the candidate graph.
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    dist[0] = 0.0;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, 0});
    while (!pq.empty())
    {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u])
            continue;
        for (auto [v, w] : adj[u])
            if (d + w < dist[v])
            {
                dist[v] = d + w;
                pq.push({dist[v], v});
            }
    }

    double worst = 0.0;
    std::size_t reached = 0;
    for (std::size_t p = 0; p < n; ++p)
    {
        if (id[p] == static_cast<VertexId>(-1))
            continue;
        ++reached;
        worst = std::max(worst, std::abs(level.graph.cost_to_come(id[p]) - dist[p]));
    }
    return {worst <= 1e-9 && reached > 1,
            fmt("%zu vertices, %zu sweeps, max |cost - dijkstra| = %.3g", reached, sweeps, worst)};
}

Verdict criterion7()
{
    PlanningProblem p = wall_gap_problem(1.2);
    PlanningProblem flat = p.single_level();
    const std::pair<PlannerName, PlannerName> pairs[] = {{PlannerName::QRRT, PlannerName::RRT},
                                                         {PlannerName::QRRTStar, PlannerName::RRTStar},
                                                         {PlannerName::QMP, PlannerName::PRM},
                                                         {PlannerName::QMPStar, PlannerName::PRMStar}};
    std::size_t identical = 0, total = 0;
    for (auto [multi, base] : pairs)
        for (std::uint64_t seed = 0; seed < 5; ++seed)
        {
            PlannerConfig a = planner_config(multi, seed), b = planner_config(base, seed);
            a.optimize = b.optimize = true;
            a.level_budget = b.level_budget = 2000;
            PlanOutcome x = plan(flat, a), y = plan(p, b);
            bool same = x.status == y.status && x.cost_trace == y.cost_trace &&
                        x.vertices_per_level == y.vertices_per_level && x.iterations_per_level == y.iterations_per_level &&
                        x.path.has_value() == y.path.has_value() &&
                        (!x.path || x.path->waypoints == y.path->waypoints);
            identical += same;
            ++total;
        }
    return {identical == total, fmt("%zu/%zu (planner, seed) pairs bit-identical", identical, total)};
}

// Random bundle over a random compound space, together with a name.
Bundle random_bundle(Rng& rng)
{
    std::uniform_int_distribution<int> pick(0, 4);
    switch (pick(rng))
    {
        case 0:
            return Bundle(StateSpace({Component::box(4, -2, 3)}), ProjectionSpec{{{ProjectionTag::RNPrefix, 2}}, false});
        case 1:
            return Bundle(StateSpace({Component::se2(-1, 1, -1, 1)}), ProjectionSpec{{{ProjectionTag::SE2ToR2, 0}}, false});
        case 2:
            return Bundle(StateSpace({Component::box(2, 0, 1), Component::so2(), Component::box(3, -1, 1)}),
                          ProjectionSpec{{{ProjectionTag::Identity, 0}, {ProjectionTag::Drop, 0},
                                          {ProjectionTag::RNPrefix, 1}},
                                         false});
        case 3:
            return Bundle(StateSpace({Component::se2(0, 5, 0, 5), Component::so2(0.5), Component::box(2, 0, 1)}),
                          ProjectionSpec{{{ProjectionTag::SE2ToR2, 0}, {ProjectionTag::Identity, 0},
                                          {ProjectionTag::Drop, 0}},
                                         false});
        default:
            return Bundle(StateSpace({Component::box(2, -5, 5), Component::box(2, -5, 5), Component::box(2, -5, 5)}),
                          ProjectionSpec{{{ProjectionTag::Identity, 0}, {ProjectionTag::Drop, 0},
                                          {ProjectionTag::Drop, 0}},
                                         false});
    }
}

Verdict criterion8()
{
    Rng rng(8);
    double worst = 0.0, worst_fiber = 0.0;
    std::size_t cases = 0, endpoint_errors = 0;
    std::uniform_int_distribution<int> waypoints(2, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int c = 0; c < 1000; ++c)
    {
        Bundle b = random_bundle(rng);
        Path base;
        for (int w = waypoints(rng); w > 0; --w)
            base.waypoints.push_back(b.base().sample_uniform(rng));
        State f1 = b.fiber().sample_uniform(rng);
        // every fourth case uses equal fibers
        State f2 = c % 4 == 0 ? f1 : b.fiber().sample_uniform(rng);
        State x1 = b.lift(base.waypoints.front(), f1), x2 = b.lift(base.waypoints.back(), f2);

        struct Flavor {
            Path section;
            std::function<double(double)> tau;  // section parameter -> base parameter
        };
        std::vector<Flavor> flavors{
            {section_l2(b, base, x1, x2), [](double t) { return t; }},
            {section_l1(b, base, x1, x2, SectionFlavor::FiberFirst),
             [](double t) { return t <= 0.5 ? 0.0 : 2.0 * t - 1.0; }},
            {section_l1(b, base, x1, x2, SectionFlavor::FiberLast),
             [](double t) { return t <= 0.5 ? 2.0 * t : 1.0; }},
        };
        for (const Flavor& fl : flavors)
        {
            if (!(fl.section.waypoints.front() == x1) || !(fl.section.waypoints.back() == x2))
                ++endpoint_errors;
            for (int i = 0; i <= 50; ++i)
            {
                double t = i == 50 ? 1.0 : (i == 0 ? 0.0 : unit(rng));
                State x = path_point(b.total(), fl.section, t);
                State want = path_point(b.base(), base, fl.tau(t));
                worst = std::max(worst, b.base().distance(b.project(x), want));
                if (f1 == f2)
                    worst_fiber = std::max(worst_fiber, b.fiber().distance(b.project_fiber(x), f1));
            }
        }
        ++cases;
    }
    bool pass = worst <= 1e-9 && worst_fiber <= 1e-9 && endpoint_errors == 0;
    return {pass, fmt("%zu cases x 3 sections: max base deviation %.3g, max fiber drift (f1 = f2) %.3g, "
                      "%zu endpoint mismatches",
                      cases, worst, worst_fiber, endpoint_errors)};
}

Verdict criterion9()
{
    PlanningProblem p = disk_crossing_problem(4);
    std::vector<double> on, off;
    std::size_t on_solved = 0, off_solved = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        PlannerConfig a = planner_config(PlannerName::QRRT, seed), b = a;
        a.find_section = true;
        b.find_section = false;
        RunRecord ra = run_once(p, "disk_crossing(robots=4)", a, seed, seed, 60.0);
        RunRecord rb = run_once(p, "disk_crossing(robots=4)", b, seed, seed, 60.0);
        on.push_back(ra.time_s);
        off.push_back(rb.time_s);
        on_solved += ra.status == PlanStatus::Solved;
        off_solved += rb.status == PlanStatus::Solved;
    }
    const double ratio = mean(on) > 0 ? mean(off) / mean(on) : 0.0;
    return {ratio > 1.0, fmt("mean on %.4fs (%zu/10 solved), off %.4fs (%zu/10 solved), off/on ratio %.3f", mean(on),
                             on_solved, mean(off), off_solved, ratio)};
}

Verdict criterion10()
{
    PlanningProblem p = wall_gap_problem(0.8);
    std::size_t ok = 0;
    double slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        PlannerConfig c = planner_config(PlannerName::QRRT, seed, 10.0);
        c.infeasibility_window = 1000;
        PlanOutcome out = plan(p, c);
        slowest = std::max(slowest, out.time_s);
        ok += out.status == PlanStatus::Infeasible && out.confidence == 1.0 - 1.0 / 1000.0 && out.time_s < 10.0;
    }
    return {ok == 10, fmt("%zu/10 infeasible with confidence 0.999, slowest %.3fs", ok, slowest)};
}

Verdict criterion11()
{
    bool sums = true;
    for (double eps : {0.1, 0.5})
        for (std::size_t levels : {1u, 2u, 5u, 10u})
        {
            double s = 0.0;
            for (std::size_t k = 1; k <= levels; ++k)
                s += epsilon_greedy_share(k, levels, eps);
            sums = sums && s == 1.0;
        }
    const double imp = importance(Importance{ImportanceKind::Exponential, 0.1}, 1, 1, 16, 4);
    return {sums && imp == 1.0 / 3.0,
            fmt("shares sum to 1 exactly: %s; exponential importance(16, d=4) = %.17g", sums ? "yes" : "no", imp)};
}

Verdict criterion12()
{
    const DecaySchedule s{1.0, 0.1, 1e-3};
    const double at0 = decay(s, 0.0), at1000 = decay(s, 1000.0);
    const double oracle = 0.1 + 0.9 / std::exp(1.0);
    bool pass = at0 == 1.0 && std::abs(at1000 - oracle) <= 1e-6 && std::abs(at1000 - 0.43109) < 1e-5;
    return {pass, fmt("k(0) = %.17g, k(1000) = %.9f (oracle %.9f)", at0, at1000, oracle)};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                         criterion5, criterion6, criterion7,  criterion8,
                                                         criterion9, criterion10, criterion11, criterion12};
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const int number = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(number))
            continue;
        Verdict v = criteria[i]();
        std::printf("criterion %d: %s - %s\n", number, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}
