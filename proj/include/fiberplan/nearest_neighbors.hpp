// SPDX-License-Identifier: BSD-3-Clause

#pragma once

#include <cstddef>
#include <vector>

#include "fiberplan/spaces.hpp"

namespace fiberplan {

using VertexId = std::size_t;

struct Neighbor {
    VertexId id;
    double distance;
};

/// Exact nearest-neighbor index under a StateSpace metric.
///
/// Points live in a k-d tree that is rebuilt whenever the number of points
/// doubles; points inserted since the last rebuild are scanned linearly.
/// Pruning only splits on non-angular coordinates, using w * |dq| as a lower
/// bound of the compound distance. Results are ordered by (distance, id), so
/// queries return exactly what a brute-force scan would.
class NearestNeighbors {
public:
    explicit NearestNeighbors(const StateSpace* space);

    void add(VertexId id, const State& s);
    std::size_t size() const { return ids_.size(); }
    void clear();

    /// Throws std::logic_error when empty.
    Neighbor nearest(const State& query) const;
    /// Up to k neighbors sorted by (distance, id). `exclude` is skipped.
    std::vector<Neighbor> k_nearest(const State& query, std::size_t k,
                                    VertexId exclude = static_cast<VertexId>(-1)) const;

private:
    struct Node {
        std::size_t begin = 0, end = 0;  // range in order_ (leaves)
        std::size_t split_coord = 0;
        double split_value = 0.0;
        int left = -1, right = -1;
    };

    const double* point(std::size_t slot) const { return &coords_[slot * dim_]; }
    void rebuild();
    int build(std::size_t begin, std::size_t end);
    void search(int node, std::span<const double> q, std::size_t k, VertexId exclude,
                std::vector<Neighbor>& best) const;
    void consider(std::size_t slot, std::span<const double> q, std::size_t k, VertexId exclude,
                  std::vector<Neighbor>& best) const;

    const StateSpace* space_;
    std::size_t dim_;
    std::vector<std::size_t> splittable_;
    std::vector<double> coords_;
    std::vector<VertexId> ids_;
    std::vector<std::size_t> order_;  // slots in tree order
    std::vector<Node> nodes_;
    std::size_t built_ = 0;
};

}  // namespace fiberplan
