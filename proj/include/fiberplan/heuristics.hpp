// SPDX-License-Identifier: BSD-3-Clause
//
// Bundle-space metrics and importance functions used to rank levels.

#pragma once

#include <cstddef>
#include <vector>

#include "fiberplan/bundles.hpp"
#include "fiberplan/level_graph.hpp"

namespace fiberplan {

enum class MetricKind { Intrinsic, QuotientSpace };
enum class ImportanceKind { Uniform, Exponential, EpsilonGreedy };

struct Importance {
    ImportanceKind kind = ImportanceKind::Exponential;
    double epsilon = 0.1;  // EpsilonGreedy only, in (0, 1)

    void validate() const;

    bool operator==(const Importance&) const = default;
};

/// Share f(k) of the epsilon-greedy schedule for level k in 1..K.
double epsilon_greedy_share(std::size_t k, std::size_t levels, double epsilon);

/// Importance in (0, 1]; larger means "grow this level next".
/// `dim` is the dimension of the bundle space being ranked.
double importance(const Importance& kind, std::size_t k, std::size_t levels, std::size_t vertex_count,
                  std::size_t dim);

/// Distance on a bundle space that routes through the base graph:
///   d_X(x1, x2)                                        if v1 == v2
///   d_F(f1, f2) + d_B(b1, v1) + d_B(b2, v2) + d_G(v1, v2)  otherwise
/// with b_i = pi(x_i), f_i = pi_F(x_i) and v_i the nearest base vertex (ties to
/// the lower id). Disconnected vertices give +infinity.
class QuotientMetric {
public:
    QuotientMetric(const Bundle& bundle, const LevelGraph& base_graph);

    double operator()(const State& x1, const State& x2) const;

    /// Caches the projection and graph distances of x1 for repeated queries.
    struct Anchor {
        State x;
        State fiber;
        VertexId vertex = 0;
        double offset = 0.0;  // d_B(b1, v1)
        std::vector<double> graph_distance;
    };
    Anchor anchor(const State& x1) const;
    double from_anchor(const Anchor& a, const State& x2) const;

private:
    const Bundle* bundle_;
    const LevelGraph* base_graph_;
};

}  // namespace fiberplan
