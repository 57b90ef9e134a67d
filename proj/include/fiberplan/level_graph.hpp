// SPDX-License-Identifier: BSD-3-Clause

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fiberplan/nearest_neighbors.hpp"
#include "fiberplan/spaces.hpp"

namespace fiberplan {

struct Edge {
    VertexId to;
    double cost;
};

struct GraphPath {
    std::vector<VertexId> vertices;
    double cost = 0.0;
};

/// Graph or tree grown on one bundle space.
///
/// Tree mode keeps parent links, cost-to-come and child lists; every non-root
/// vertex owns exactly the edge to its parent. Roadmap mode is an undirected
/// graph with union-find connectivity. Both keep a nearest-neighbor index, an
/// edge list for uniform edge sampling and a degree-weighted sampler.
class LevelGraph {
public:
    enum class Mode { Tree, Roadmap };

    LevelGraph(const StateSpace* space, Mode mode);

    Mode mode() const { return mode_; }
    const StateSpace& space() const { return *space_; }

    /// Adds an isolated vertex (the tree root, or any roadmap vertex).
    VertexId add_vertex(State s);
    /// Tree mode: adds s below `parent` with the given edge cost.
    VertexId add_child(VertexId parent, State s, double edge_cost);
    /// Roadmap mode: false for self loops and existing edges.
    bool add_edge(VertexId u, VertexId v, double cost);
    bool has_edge(VertexId u, VertexId v) const;

    /// Tree mode: moves y below new_parent and refreshes the subtree costs.
    void reparent(VertexId y, VertexId new_parent, double edge_cost);
    bool is_ancestor(VertexId a, VertexId v) const;

    std::size_t num_vertices() const { return states_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    bool empty() const { return states_.empty(); }

    const State& state(VertexId v) const { return states_[v]; }
    const std::vector<State>& states() const { return states_; }
    const std::vector<Edge>& neighbors(VertexId v) const { return adjacency_[v]; }
    std::size_t degree(VertexId v) const { return adjacency_[v].size(); }
    std::pair<VertexId, VertexId> edge(std::size_t i) const { return edges_[i]; }

    std::optional<VertexId> parent(VertexId v) const;
    double cost_to_come(VertexId v) const { return cost_[v]; }
    double parent_edge_cost(VertexId v) const { return parent_cost_[v]; }
    const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
    /// Root-to-v vertex sequence in tree mode.
    std::vector<VertexId> tree_path(VertexId v) const;

    bool connected(VertexId u, VertexId v) const;

    /// Vertex drawn with probability proportional to 1 / (degree + 1).
    VertexId sample_degree_weighted(Rng& rng) const;
    double degree_weight_total() const;

    const NearestNeighbors& index() const { return index_; }

    /// Single-source shortest path costs (infinity when unreachable).
    std::vector<double> dijkstra(VertexId source) const;
    /// A* with the space metric as heuristic; nullopt when disconnected.
    std::optional<GraphPath> shortest_path(VertexId from, VertexId to) const;

private:
    VertexId push_vertex(State s);
    void link(VertexId u, VertexId v, double cost);
    void unlink(VertexId u, VertexId v);
    void refresh_degree_weight(VertexId v);
    VertexId find(VertexId v) const;

    // Fenwick tree over 1 / (degree + 1).
    void fenwick_append(double w);
    void fenwick_add(std::size_t i, double delta);
    double fenwick_prefix(std::size_t count) const;

    const StateSpace* space_;
    Mode mode_;
    std::vector<State> states_;
    std::vector<std::vector<Edge>> adjacency_;
    std::vector<std::pair<VertexId, VertexId>> edges_;

    std::vector<std::optional<VertexId>> parent_;
    std::vector<double> cost_;
    std::vector<double> parent_cost_;
    std::vector<std::vector<VertexId>> children_;
    std::vector<std::size_t> parent_edge_slot_;

    mutable std::vector<VertexId> uf_parent_;
    std::vector<double> fenwick_;
    std::vector<double> weights_;

    NearestNeighbors index_;
};

}  // namespace fiberplan
