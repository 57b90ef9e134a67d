// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace fiberplan {

double decay(const DecaySchedule& schedule, double t)
{
    if (t < 0.0)
        throw std::invalid_argument("decay: t must be nonnegative");
    return (schedule.start - schedule.end) * std::exp(-schedule.rate * t) + schedule.end;
}

void SamplerConfig::validate() const
{
    if (!(beta_fixed >= 0.0 && beta_fixed <= 1.0))
        throw std::invalid_argument("beta_fixed must lie in [0, 1]");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("lambda must be nonnegative");
    if (!(nbh_epsilon >= 0.0))
        throw std::invalid_argument("nbh_epsilon must be nonnegative");
    if (!(nbh_lambda >= 0.0))
        throw std::invalid_argument("nbh_lambda must be nonnegative");
}

State sample_graph(GraphSampling strategy, const LevelGraph& graph, Rng& rng)
{
    if (graph.empty())
        throw std::logic_error("graph sampling on an empty graph");
    switch (strategy)
    {
        case GraphSampling::RandomDegreeVertex:
            return graph.state(graph.sample_degree_weighted(rng));
        case GraphSampling::RandomEdge:
        case GraphSampling::Neighborhood:
            if (graph.num_edges() > 0)
            {
                std::size_t e = std::uniform_int_distribution<std::size_t>(0, graph.num_edges() - 1)(rng);
                auto [u, v] = graph.edge(e);
                double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                return graph.space().interpolate(graph.state(u), graph.state(v), t);
            }
            [[fallthrough]];
        case GraphSampling::RandomVertex:
            break;
    }
    std::size_t v = std::uniform_int_distribution<std::size_t>(0, graph.num_vertices() - 1)(rng);
    return graph.state(v);
}

State sample_path_restriction(const StateSpace& space, const Path& path, Rng& rng)
{
    if (path.waypoints.empty())
        throw std::logic_error("path restriction sampling on an empty path");
    if (path.waypoints.size() == 1)
        return path.waypoints.front();
    Path plain{path.waypoints, {}};
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return path_point(space, plain, u);
}

State sample_ball(const StateSpace& space, const State& center, double radius, Rng& rng)
{
    const std::size_t d = space.dim();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> dir(d);
    double norm = 0.0;
    do
    {
        norm = 0.0;
        for (auto& v : dir)
        {
            v = gauss(rng);
            norm += v * v;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    double r = radius * std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1.0 / static_cast<double>(d));
    State x = center;
    for (std::size_t i = 0; i < d; ++i)
        x[i] += r * dir[i] / norm / space.coord_weight(i);
    space.enforce_bounds(x);
    return x;
}

Path simplify_path(const StateSpace& space, const Path& path, const MotionValidator& motion_valid, Rng& rng,
                   std::size_t attempts)
{
    Path out{path.waypoints, {}};
    for (std::size_t a = 0; a < attempts && out.waypoints.size() > 2; ++a)
    {
        const std::size_t n = out.waypoints.size();
        std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 3)(rng);
        std::size_t j = std::uniform_int_distribution<std::size_t>(i + 2, n - 1)(rng);
        double direct = space.distance(out.waypoints[i], out.waypoints[j]);
        double along = 0.0;
        for (std::size_t k = i; k < j; ++k)
            along += space.distance(out.waypoints[k], out.waypoints[k + 1]);
        if (direct < along && motion_valid(out.waypoints[i], out.waypoints[j]))
            out.waypoints.erase(out.waypoints.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                out.waypoints.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return out;
}

double path_bias_probability(const SamplerConfig& config, double t)
{
    switch (config.path_bias)
    {
        case PathBiasMode::Off:
            return 0.0;
        case PathBiasMode::Fixed:
            return config.beta_fixed;
        case PathBiasMode::Decay:
            return decay({1.0, config.beta_fixed, config.lambda}, t);
    }
    return 0.0;
}

State sample_base(const SamplerConfig& config, const LevelGraph& base_graph, const Path* base_solution, double t,
                  Rng& rng)
{
    bool on_path = false;
    if (base_solution != nullptr && !base_solution->waypoints.empty() && config.path_bias != PathBiasMode::Off)
    {
        double p = path_bias_probability(config, t);
        on_path = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    }
    State x = on_path ? sample_path_restriction(base_graph.space(), *base_solution, rng)
                      : sample_graph(config.strategy, base_graph, rng);
    if (config.strategy == GraphSampling::Neighborhood)
    {
        double radius = decay({0.0, config.nbh_epsilon * base_graph.space().max_extent(), config.nbh_lambda}, t);
        if (radius > 0.0)
            x = sample_ball(base_graph.space(), x, radius, rng);
    }
    return x;
}

State restriction_sample(const StateSpace& space, const Bundle* bundle, const SamplerConfig& config,
                         const LevelGraph* base_graph, const Path* base_solution, double t, Rng& rng)
{
    if (bundle == nullptr || base_graph == nullptr)
        return space.sample_uniform(rng);
    State b = sample_base(config, *base_graph, base_solution, t, rng);
    State f = bundle->fiber().dim() > 0 ? bundle->fiber().sample_uniform(rng) : State{};
    return bundle->lift(b, f);
}

}  // namespace fiberplan
