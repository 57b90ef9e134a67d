// SPDX-License-Identifier: BSD-3-Clause
//
// Restriction sampling: draw total-space states whose base projection lies on
// the base graph (or its lowest-cost path), lifted with a uniform fiber element.

#pragma once

#include <cstddef>
#include <functional>

#include "fiberplan/bundles.hpp"
#include "fiberplan/level_graph.hpp"
#include "fiberplan/spaces.hpp"

namespace fiberplan {

/// kappa(t) = (start - end) * exp(-rate * t) + end
struct DecaySchedule {
    double start = 1.0;
    double end = 0.0;
    double rate = 0.0;
};

double decay(const DecaySchedule& schedule, double t);

enum class GraphSampling { RandomVertex, RandomEdge, RandomDegreeVertex, Neighborhood };
enum class PathBiasMode { Off, Fixed, Decay };

struct SamplerConfig {
    GraphSampling strategy = GraphSampling::RandomEdge;
    PathBiasMode path_bias = PathBiasMode::Decay;
    double beta_fixed = 0.1;
    double lambda = 1e-3;
    /// Neighborhood radius as a fraction of the base max extent.
    double nbh_epsilon = 0.1;
    double nbh_lambda = 1e-3;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const SamplerConfig&) const = default;
};

using MotionValidator = std::function<bool(const State&, const State&)>;

/// RV, RE or RDV draw on the graph. Neighborhood falls back to RE here; the
/// ball perturbation is applied by sample_base. RE without edges behaves as RV.
State sample_graph(GraphSampling strategy, const LevelGraph& graph, Rng& rng);

/// Uniform arc-length point on the path.
State sample_path_restriction(const StateSpace& space, const Path& path, Rng& rng);

/// Uniform draw from the metric ball of `radius` around `center`, clamped to
/// the space bounds.
State sample_ball(const StateSpace& space, const State& center, double radius, Rng& rng);

/// Random shortcutting: each attempt picks two waypoints and replaces the
/// waypoints between them when the direct motion is valid and shorter.
Path simplify_path(const StateSpace& space, const Path& path, const MotionValidator& motion_valid, Rng& rng,
                   std::size_t attempts = 100);

/// Probability of drawing from the path restriction at grow iteration t.
double path_bias_probability(const SamplerConfig& config, double t);

/// Base-space draw for restriction sampling. `base_solution` may be null.
State sample_base(const SamplerConfig& config, const LevelGraph& base_graph, const Path* base_solution, double t,
                  Rng& rng);

/// One restriction sample on the bundle space. Without a base level
/// (`bundle == nullptr`) this is exactly space.sample_uniform(rng).
State restriction_sample(const StateSpace& space, const Bundle* bundle, const SamplerConfig& config,
                         const LevelGraph* base_graph, const Path* base_solution, double t, Rng& rng);

}  // namespace fiberplan
