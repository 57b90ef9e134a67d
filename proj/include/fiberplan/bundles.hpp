// SPDX-License-Identifier: BSD-3-Clause
//
// Fiber bundles over compound state spaces: base/fiber projections, lifts,
// bundle sequences and path sections (L2, L1 fiber-first, L1 fiber-last).

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fiberplan/spaces.hpp"

namespace fiberplan {

enum class ProjectionTag {
    Identity,  // component kept in the base
    Drop,      // component moved to the fiber
    SE2ToR2,   // position kept in the base, heading moved to the fiber
    RNPrefix,  // first `prefix` coordinates kept, the rest moved to the fiber
};

struct ComponentProjection {
    ProjectionTag tag = ProjectionTag::Identity;
    std::size_t prefix = 0;

    bool operator==(const ComponentProjection&) const = default;
};

struct ProjectionSpec {
    std::vector<ComponentProjection> components;
    /// Allows an all-Identity spec (empty fiber).
    bool identity_bundle = false;

    /// Parses tags such as "identity", "drop", "se2_to_r2", "prefix:3".
    static ComponentProjection parse_tag(const std::string& tag);
    static std::string tag_name(const ComponentProjection& p);

    bool operator==(const ProjectionSpec&) const = default;
};

enum class Twist { Trivial, Mobius };

class Bundle {
public:
    Bundle(StateSpace total, ProjectionSpec spec);

    /// SO2 x [0,1] strip whose fiber is reflected (u -> 1 - u) across the
    /// chart seam at theta = +-pi.
    static Bundle mobius();

    const StateSpace& total() const { return total_; }
    const StateSpace& base() const { return base_; }
    const StateSpace& fiber() const { return fiber_; }
    const ProjectionSpec& spec() const { return spec_; }
    Twist twist() const { return twist_; }

    /// Total-space coordinate indices that make up the base (resp. fiber).
    const std::vector<std::size_t>& base_coords() const { return base_coords_; }
    const std::vector<std::size_t>& fiber_coords() const { return fiber_coords_; }

    State project(const State& x) const;
    State project_fiber(const State& x) const;
    State lift(const State& b, const State& f) const;

    /// Geodesic on the total space; handles the seam identification for the
    /// Mobius twist and is componentwise otherwise.
    State interpolate_total(const State& x, const State& y, double t) const;

private:
    StateSpace total_;
    StateSpace base_;
    StateSpace fiber_;
    ProjectionSpec spec_;
    Twist twist_ = Twist::Trivial;
    std::vector<std::size_t> base_coords_;
    std::vector<std::size_t> fiber_coords_;
};

/// Mobius-strip geodesic in the single chart [-pi, pi) x [0, 1].
State interpolate_total_mobius(const State& x, const State& y, double t);

/// X_K -> ... -> X_1. spaces()[k] is the k-th bundle space (0-based) and
/// bundles()[k] projects spaces()[k + 1] onto spaces()[k].
class BundleSequence {
public:
    /// Single-level sequence (no projections).
    explicit BundleSequence(StateSpace top);
    /// `bundles` ordered from the lowest level upwards.
    explicit BundleSequence(std::vector<Bundle> bundles);

    /// Builds the sequence by repeatedly applying `specs` top-down.
    static BundleSequence from_specs(const StateSpace& top, const std::vector<ProjectionSpec>& specs);

    std::size_t levels() const { return spaces_.size(); }
    const std::vector<StateSpace>& spaces() const { return spaces_; }
    const std::vector<Bundle>& bundles() const { return bundles_; }
    const StateSpace& space(std::size_t k) const { return spaces_.at(k); }
    const Bundle& bundle_below(std::size_t k) const { return bundles_.at(k - 1); }

    /// Projects a top-level state down to level k.
    State project_to(std::size_t k, const State& top) const;
    /// Indices of top-level coordinates surviving at level k.
    std::vector<std::size_t> coords_at(std::size_t k) const;

private:
    std::vector<StateSpace> spaces_;
    std::vector<Bundle> bundles_;
};

using ValidityFn = std::function<bool(const State&)>;

/// Counts uniform total-space samples x with valid(x) but !valid_base(pi(x)).
std::size_t check_admissible(const Bundle& bundle, const ValidityFn& valid_total, const ValidityFn& valid_base,
                             std::size_t samples, Rng& rng);

/// Tolerance for pi(x1) == p_B(0) and pi(x2) == p_B(1).
inline constexpr double kSectionTolerance = 1e-9;

enum class SectionFlavor { FiberFirst, FiberLast };

/// Lifts p_B with the fiber interpolated linearly (geodesically) from
/// pi_F(x1) to pi_F(x2) by base arc-length. Knots follow the base path.
Path section_l2(const Bundle& bundle, const Path& base_path, const State& x1, const State& x2);

/// L1 section: the fiber moves in one geodesic segment at the start (FF) or at
/// the end (FL) of the base path. The fiber segment occupies parameters
/// [0, 1/2] (FF) or [1/2, 1] (FL); the base path is traversed on the other half.
Path section_l1(const Bundle& bundle, const Path& base_path, const State& x1, const State& x2, SectionFlavor flavor);

}  // namespace fiberplan
