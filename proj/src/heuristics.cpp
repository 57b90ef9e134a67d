// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/heuristics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fiberplan {

void Importance::validate() const
{
    if (kind == ImportanceKind::EpsilonGreedy && !(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
}

double epsilon_greedy_share(std::size_t k, std::size_t levels, double epsilon)
{
    if (k < 1 || k > levels)
        throw std::invalid_argument("level index out of range");
    auto raw = [&](std::size_t j) {
        const double hi = std::pow(epsilon, static_cast<double>(levels - j));
        return j == 1 ? hi : hi - std::pow(epsilon, static_cast<double>(levels - j + 1));
    };
    if (k < levels)
        return raw(k);
    // The top share absorbs rounding so that the shares summed in level order
    // give exactly 1.
    double below = 0.0;
    for (std::size_t j = 1; j < levels; ++j)
        below += raw(j);
    return 1.0 - below;
}

double importance(const Importance& kind, std::size_t k, std::size_t levels, std::size_t vertex_count,
                  std::size_t dim)
{
    if (dim < 1)
        throw std::invalid_argument("importance needs dim >= 1");
    const double n = static_cast<double>(vertex_count);
    switch (kind.kind)
    {
        case ImportanceKind::Uniform:
            return 1.0 / (n + 1.0);
        case ImportanceKind::Exponential:
            return 1.0 / (std::pow(n, 1.0 / static_cast<double>(dim)) + 1.0);
        case ImportanceKind::EpsilonGreedy: {
            if (vertex_count == 0)
                return 1.0;
            double share = epsilon_greedy_share(k, levels, kind.epsilon);
            return 1.0 / (n / share + 1.0);
        }
    }
    return 0.0;
}

QuotientMetric::QuotientMetric(const Bundle& bundle, const LevelGraph& base_graph)
    : bundle_(&bundle), base_graph_(&base_graph)
{
}

QuotientMetric::Anchor QuotientMetric::anchor(const State& x1) const
{
    if (base_graph_->empty())
        throw std::logic_error("quotient-space metric needs a non-empty base graph");
    Anchor a;
    a.x = x1;
    a.fiber = bundle_->project_fiber(x1);
    Neighbor nn = base_graph_->index().nearest(bundle_->project(x1));
    a.vertex = nn.id;
    a.offset = nn.distance;
    a.graph_distance = base_graph_->dijkstra(nn.id);
    return a;
}

double QuotientMetric::from_anchor(const Anchor& a, const State& x2) const
{
    Neighbor nn = base_graph_->index().nearest(bundle_->project(x2));
    if (nn.id == a.vertex)
        return bundle_->total().distance(a.x, x2);
    double through_graph = a.graph_distance[nn.id];
    if (!std::isfinite(through_graph))
        return std::numeric_limits<double>::infinity();
    double fiber = bundle_->fiber().dim() > 0 ? bundle_->fiber().distance(a.fiber, bundle_->project_fiber(x2)) : 0.0;
    return fiber + a.offset + nn.distance + through_graph;
}

double QuotientMetric::operator()(const State& x1, const State& x2) const
{
    if (base_graph_->empty())
        throw std::logic_error("quotient-space metric needs a non-empty base graph");
    Neighbor n1 = base_graph_->index().nearest(bundle_->project(x1));
    Neighbor n2 = base_graph_->index().nearest(bundle_->project(x2));
    if (n1.id == n2.id)
        return bundle_->total().distance(x1, x2);
    auto path = base_graph_->shortest_path(n1.id, n2.id);
    if (!path)
        return std::numeric_limits<double>::infinity();
    double fiber = bundle_->fiber().dim() > 0
                       ? bundle_->fiber().distance(bundle_->project_fiber(x1), bundle_->project_fiber(x2))
                       : 0.0;
    return fiber + n1.distance + n2.distance + path->cost;
}

}  // namespace fiberplan
