// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/level_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fiberplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LevelGraph::LevelGraph(const StateSpace* space, Mode mode) : space_(space), mode_(mode), index_(space) {}

VertexId LevelGraph::push_vertex(State s)
{
    space_->require_member(s, "graph vertex");
    VertexId id = states_.size();
    index_.add(id, s);
    states_.push_back(std::move(s));
    adjacency_.emplace_back();
    parent_.emplace_back();
    cost_.push_back(0.0);
    parent_cost_.push_back(0.0);
    children_.emplace_back();
    parent_edge_slot_.push_back(static_cast<std::size_t>(-1));
    uf_parent_.push_back(id);
    fenwick_append(1.0);
    return id;
}

VertexId LevelGraph::add_vertex(State s)
{
    return push_vertex(std::move(s));
}

VertexId LevelGraph::add_child(VertexId parent, State s, double edge_cost)
{
    if (mode_ != Mode::Tree)
        throw std::logic_error("add_child on a roadmap");
    if (parent >= states_.size())
        throw std::out_of_range("add_child: unknown parent");
    VertexId v = push_vertex(std::move(s));
    parent_[v] = parent;
    parent_cost_[v] = edge_cost;
    cost_[v] = cost_[parent] + edge_cost;
    children_[parent].push_back(v);
    parent_edge_slot_[v] = edges_.size();
    edges_.emplace_back(parent, v);
    link(parent, v, edge_cost);
    uf_parent_[v] = find(parent);
    return v;
}

bool LevelGraph::add_edge(VertexId u, VertexId v, double cost)
{
    if (mode_ != Mode::Roadmap)
        throw std::logic_error("add_edge on a tree; use add_child or reparent");
    if (u == v || has_edge(u, v))
        return false;
    edges_.emplace_back(u, v);
    link(u, v, cost);
    VertexId ru = find(u), rv = find(v);
    if (ru != rv)
        uf_parent_[std::max(ru, rv)] = std::min(ru, rv);
    return true;
}

bool LevelGraph::has_edge(VertexId u, VertexId v) const
{
    const auto& small = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
    VertexId other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
    return std::any_of(small.begin(), small.end(), [&](const Edge& e) { return e.to == other; });
}

void LevelGraph::link(VertexId u, VertexId v, double cost)
{
    adjacency_[u].push_back({v, cost});
    adjacency_[v].push_back({u, cost});
    refresh_degree_weight(u);
    refresh_degree_weight(v);
}

void LevelGraph::unlink(VertexId u, VertexId v)
{
    auto drop = [](std::vector<Edge>& adj, VertexId other) {
        auto it = std::find_if(adj.begin(), adj.end(), [&](const Edge& e) { return e.to == other; });
        if (it != adj.end())
            adj.erase(it);
    };
    drop(adjacency_[u], v);
    drop(adjacency_[v], u);
    refresh_degree_weight(u);
    refresh_degree_weight(v);
}

void LevelGraph::reparent(VertexId y, VertexId new_parent, double edge_cost)
{
    if (mode_ != Mode::Tree)
        throw std::logic_error("reparent on a roadmap");
    if (!parent_[y])
        throw std::logic_error("cannot reparent the root");
    if (is_ancestor(y, new_parent))
        throw std::logic_error("reparent would create a cycle");
    VertexId old = *parent_[y];
    unlink(old, y);
    auto& siblings = children_[old];
    siblings.erase(std::find(siblings.begin(), siblings.end(), y));

    parent_[y] = new_parent;
    parent_cost_[y] = edge_cost;
    children_[new_parent].push_back(y);
    edges_[parent_edge_slot_[y]] = {new_parent, y};
    link(new_parent, y, edge_cost);

    std::vector<VertexId> stack{y};
    while (!stack.empty())
    {
        VertexId v = stack.back();
        stack.pop_back();
        cost_[v] = cost_[*parent_[v]] + parent_cost_[v];
        for (VertexId c : children_[v])
            stack.push_back(c);
    }
}

bool LevelGraph::is_ancestor(VertexId a, VertexId v) const
{
    std::optional<VertexId> cur = v;
    while (cur)
    {
        if (*cur == a)
            return true;
        cur = parent_[*cur];
    }
    return false;
}

std::optional<VertexId> LevelGraph::parent(VertexId v) const
{
    return parent_[v];
}

std::vector<VertexId> LevelGraph::tree_path(VertexId v) const
{
    std::vector<VertexId> path;
    std::optional<VertexId> cur = v;
    while (cur)
    {
        path.push_back(*cur);
        cur = parent_[*cur];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

VertexId LevelGraph::find(VertexId v) const
{
    while (uf_parent_[v] != v)
    {
        uf_parent_[v] = uf_parent_[uf_parent_[v]];
        v = uf_parent_[v];
    }
    return v;
}

bool LevelGraph::connected(VertexId u, VertexId v) const
{
    return find(u) == find(v);
}

void LevelGraph::fenwick_append(double w)
{
    weights_.push_back(w);
    std::size_t i = weights_.size();  // 1-based
    std::size_t low = i & (~i + 1);
    fenwick_.push_back(w + fenwick_prefix(i - 1) - fenwick_prefix(i - low));
}

void LevelGraph::fenwick_add(std::size_t i, double delta)
{
    for (std::size_t j = i + 1; j <= fenwick_.size(); j += j & (~j + 1))
        fenwick_[j - 1] += delta;
}

double LevelGraph::fenwick_prefix(std::size_t count) const
{
    double sum = 0.0;
    for (std::size_t j = count; j > 0; j -= j & (~j + 1))
        sum += fenwick_[j - 1];
    return sum;
}

void LevelGraph::refresh_degree_weight(VertexId v)
{
    double w = 1.0 / (static_cast<double>(adjacency_[v].size()) + 1.0);
    fenwick_add(v, w - weights_[v]);
    weights_[v] = w;
}

double LevelGraph::degree_weight_total() const
{
    return fenwick_prefix(fenwick_.size());
}

VertexId LevelGraph::sample_degree_weighted(Rng& rng) const
{
    if (states_.empty())
        throw std::logic_error("degree-weighted sampling on an empty graph");
    double target = std::uniform_real_distribution<double>(0.0, degree_weight_total())(rng);
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 <= fenwick_.size())
        step *= 2;
    for (; step > 0; step /= 2)
    {
        if (pos + step <= fenwick_.size() && fenwick_[pos + step - 1] <= target)
        {
            pos += step;
            target -= fenwick_[pos - 1];
        }
    }
    return std::min(pos, states_.size() - 1);
}

std::vector<double> LevelGraph::dijkstra(VertexId source) const
{
    std::vector<double> dist(states_.size(), kInf);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[source] = 0.0;
    open.emplace(0.0, source);
    while (!open.empty())
    {
        auto [d, v] = open.top();
        open.pop();
        if (d > dist[v])
            continue;
        for (const Edge& e : adjacency_[v])
        {
            double nd = d + e.cost;
            if (nd < dist[e.to])
            {
                dist[e.to] = nd;
                open.emplace(nd, e.to);
            }
        }
    }
    return dist;
}

std::optional<GraphPath> LevelGraph::shortest_path(VertexId from, VertexId to) const
{
    if (from >= states_.size() || to >= states_.size())
        throw std::out_of_range("shortest_path: unknown vertex");
    if (!connected(from, to))
        return std::nullopt;
    std::vector<double> g(states_.size(), kInf);
    std::vector<VertexId> pred(states_.size(), static_cast<VertexId>(-1));
    std::vector<char> closed(states_.size(), 0);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    g[from] = 0.0;
    open.emplace(space_->distance(states_[from], states_[to]), from);
    while (!open.empty())
    {
        VertexId v = open.top().second;
        open.pop();
        if (closed[v])
            continue;
        closed[v] = 1;
        if (v == to)
            break;
        for (const Edge& e : adjacency_[v])
        {
            double ng = g[v] + e.cost;
            if (ng < g[e.to])
            {
                g[e.to] = ng;
                pred[e.to] = v;
                open.emplace(ng + space_->distance(states_[e.to], states_[to]), e.to);
            }
        }
    }
    if (!std::isfinite(g[to]))
        return std::nullopt;
    GraphPath path;
    path.cost = g[to];
    for (VertexId v = to; v != from; v = pred[v])
        path.vertices.push_back(v);
    path.vertices.push_back(from);
    std::reverse(path.vertices.begin(), path.vertices.end());
    return path;
}

}  // namespace fiberplan
