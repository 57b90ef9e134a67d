// SPDX-License-Identifier: BSD-3-Clause
//
// Composite state spaces: products of bounded real-vector boxes, SO(2) and
// SE(2) with a weighted L2 compound metric.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fiberplan {

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

/// Maps an angle into [-pi, pi).
double normalize_angle(double angle);

/// Signed shortest-arc difference to - from, in [-pi, pi).
double angle_difference(double from, double to);

enum class ComponentKind { RealVector, SO2, SE2 };

/// One factor of a compound space. SE2 stores (x, y, theta) and bounds only
/// the position.
struct Component {
    ComponentKind kind = ComponentKind::RealVector;
    std::vector<double> lower;
    std::vector<double> upper;
    double weight = 1.0;

    static Component real_vector(std::vector<double> lower, std::vector<double> upper,
                                 double weight = 1.0);
    static Component box(std::size_t dim, double lower, double upper, double weight = 1.0);
    static Component so2(double weight = 1.0);
    static Component se2(double xlo, double xhi, double ylo, double yhi, double weight = 1.0);

    std::size_t dim() const;
    /// Largest component geodesic distance (box diagonal, pi for SO2).
    double diameter() const;

    bool operator==(const Component&) const = default;
};

/// A point of a StateSpace, stored as flat coordinates in component order.
struct State {
    std::vector<double> values;

    State() = default;
    explicit State(std::vector<double> v) : values(std::move(v)) {}
    State(std::initializer_list<double> v) : values(v) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::span<const double> coords() const { return values; }

    bool operator==(const State&) const = default;
};

class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<Component> components);

    static StateSpace unit_cube(std::size_t dim);

    const std::vector<Component>& components() const { return components_; }
    std::size_t dim() const { return dim_; }
    /// Offset of component i in the flat coordinate array.
    std::size_t offset(std::size_t i) const { return offsets_[i]; }
    /// True for coordinates that are angles (SO2, or the heading of SE2).
    bool is_angular(std::size_t coord) const { return angular_[coord] != 0; }
    /// Weight of the component owning a flat coordinate.
    double coord_weight(std::size_t coord) const { return coord_weights_[coord]; }

    double distance(const State& x, const State& y) const;
    double distance(std::span<const double> x, std::span<const double> y) const;

    State interpolate(const State& x, const State& y, double t) const;
    /// Allocation-free variant; `out` is resized as needed.
    void interpolate(const State& x, const State& y, double t, State& out) const;

    State sample_uniform(Rng& rng) const;
    double max_extent() const;

    /// Dimension and bounds membership; angles must already be normalized.
    bool contains(const State& x, double tolerance = 1e-12) const;
    /// Clamps real coordinates into bounds and normalizes angles.
    void enforce_bounds(State& x) const;
    /// Throws std::invalid_argument when x does not have this space's arity.
    void require_member(const State& x, const char* what) const;

    std::string describe() const;

    bool operator==(const StateSpace& other) const { return components_ == other.components_; }

private:
    std::vector<Component> components_;
    std::vector<std::size_t> offsets_;
    std::vector<char> angular_;
    std::vector<double> coord_weights_;
    std::size_t dim_ = 0;
};

/// Piecewise-geodesic path. When `knots` is empty the path is parameterized by
/// arc-length fraction; otherwise knots[i] is the parameter of waypoint i.
struct Path {
    std::vector<State> waypoints;
    std::vector<double> knots;
};

double path_length(const StateSpace& space, const Path& path);
/// Arc-length fractions of each waypoint (all zero for a zero-length path).
std::vector<double> arc_fractions(const StateSpace& space, const Path& path);
/// Point at parameter t in [0, 1] (knots if present, else arc length).
State path_point(const StateSpace& space, const Path& path, double t);

}  // namespace fiberplan
