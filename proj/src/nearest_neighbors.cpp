// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/nearest_neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fiberplan {

namespace {

constexpr std::size_t kLeafSize = 8;
constexpr std::size_t kMinTreeSize = 64;

bool before(const Neighbor& a, const Neighbor& b)
{
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

}  // namespace

NearestNeighbors::NearestNeighbors(const StateSpace* space) : space_(space), dim_(space->dim())
{
    for (std::size_t i = 0; i < dim_; ++i)
        if (!space->is_angular(i))
            splittable_.push_back(i);
}

void NearestNeighbors::clear()
{
    coords_.clear();
    ids_.clear();
    order_.clear();
    nodes_.clear();
    built_ = 0;
}

void NearestNeighbors::add(VertexId id, const State& s)
{
    space_->require_member(s, "nearest neighbors");
    coords_.insert(coords_.end(), s.values.begin(), s.values.end());
    ids_.push_back(id);
    if (!splittable_.empty() && ids_.size() >= kMinTreeSize && ids_.size() >= 2 * built_)
        rebuild();
}

void NearestNeighbors::rebuild()
{
    built_ = ids_.size();
    order_.resize(built_);
    for (std::size_t i = 0; i < built_; ++i)
        order_[i] = i;
    nodes_.clear();
    nodes_.reserve(2 * built_ / kLeafSize + 2);
    build(0, built_);
}

int NearestNeighbors::build(std::size_t begin, std::size_t end)
{
    int index = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize)
        return index;

    std::size_t best_coord = splittable_.front();
    double best_spread = -1.0;
    for (std::size_t c : splittable_)
    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = begin; i < end; ++i)
        {
            double v = point(order_[i])[c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double spread = (hi - lo) * space_->coord_weight(c);
        if (spread > best_spread)
        {
            best_spread = spread;
            best_coord = c;
        }
    }
    if (best_spread <= 0.0)
        return index;

    std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) { return point(a)[best_coord] < point(b)[best_coord]; });
    double split = point(order_[mid])[best_coord];
    nodes_[index].split_coord = best_coord;
    nodes_[index].split_value = split;
    // Points in [begin, mid) are <= split, points in [mid, end) are >= split.
    int left = build(begin, mid);
    int right = build(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

void NearestNeighbors::consider(std::size_t slot, std::span<const double> q, std::size_t k, VertexId exclude,
                                std::vector<Neighbor>& best) const
{
    VertexId id = ids_[slot];
    if (id == exclude)
        return;
    Neighbor n{id, space_->distance(q, std::span<const double>(point(slot), dim_))};
    if (best.size() == k && !before(n, best.back()))
        return;
    auto pos = std::upper_bound(best.begin(), best.end(), n, before);
    best.insert(pos, n);
    if (best.size() > k)
        best.pop_back();
}

void NearestNeighbors::search(int node_index, std::span<const double> q, std::size_t k, VertexId exclude,
                              std::vector<Neighbor>& best) const
{
    const Node& node = nodes_[node_index];
    if (node.left < 0)
    {
        for (std::size_t i = node.begin; i < node.end; ++i)
            consider(order_[i], q, k, exclude, best);
        return;
    }
    double diff = q[node.split_coord] - node.split_value;
    int near = diff <= 0.0 ? node.left : node.right;
    int far = diff <= 0.0 ? node.right : node.left;
    search(near, q, k, exclude, best);
    double bound = std::abs(diff) * space_->coord_weight(node.split_coord);
    if (best.size() < k || bound <= best.back().distance)
        search(far, q, k, exclude, best);
}

Neighbor NearestNeighbors::nearest(const State& query) const
{
    auto result = k_nearest(query, 1);
    if (result.empty())
        throw std::logic_error("nearest neighbor query on an empty index");
    return result.front();
}

std::vector<Neighbor> NearestNeighbors::k_nearest(const State& query, std::size_t k, VertexId exclude) const
{
    std::vector<Neighbor> best;
    if (k == 0 || ids_.empty())
        return best;
    space_->require_member(query, "nearest neighbors");
    best.reserve(k + 1);
    std::span<const double> q = query.coords();
    if (built_ > 0)
        search(0, q, k, exclude, best);
    for (std::size_t slot = built_; slot < ids_.size(); ++slot)
        consider(slot, q, k, exclude, best);
    return best;
}

}  // namespace fiberplan
