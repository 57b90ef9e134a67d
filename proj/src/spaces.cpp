// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fiberplan {

double normalize_angle(double angle)
{
    constexpr double two_pi = 2.0 * kPi;
    double a = std::fmod(angle + kPi, two_pi);
    if (a < 0.0)
        a += two_pi;
    if (a >= two_pi)
        a = 0.0;
    double r = a - kPi;
    return r >= kPi ? -kPi : r;
}

double angle_difference(double from, double to)
{
    return normalize_angle(to - from);
}

Component Component::real_vector(std::vector<double> lower, std::vector<double> upper, double weight)
{
    if (lower.size() != upper.size() || lower.empty())
        throw std::invalid_argument("real vector bounds must be non-empty and of equal size");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("real vector bound requires lower < upper");
    if (!(weight > 0.0))
        throw std::invalid_argument("component weight must be positive");
    return Component{ComponentKind::RealVector, std::move(lower), std::move(upper), weight};
}

Component Component::box(std::size_t dim, double lower, double upper, double weight)
{
    return real_vector(std::vector<double>(dim, lower), std::vector<double>(dim, upper), weight);
}

Component Component::so2(double weight)
{
    if (!(weight > 0.0))
        throw std::invalid_argument("component weight must be positive");
    return Component{ComponentKind::SO2, {}, {}, weight};
}

Component Component::se2(double xlo, double xhi, double ylo, double yhi, double weight)
{
    Component c = real_vector({xlo, ylo}, {xhi, yhi}, weight);
    c.kind = ComponentKind::SE2;
    return c;
}

std::size_t Component::dim() const
{
    switch (kind)
    {
        case ComponentKind::RealVector:
            return lower.size();
        case ComponentKind::SO2:
            return 1;
        case ComponentKind::SE2:
            return 3;
    }
    return 0;
}

double Component::diameter() const
{
    double sq = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i)
        sq += (upper[i] - lower[i]) * (upper[i] - lower[i]);
    if (kind != ComponentKind::RealVector)
        sq += kPi * kPi;
    return std::sqrt(sq);
}

StateSpace::StateSpace(std::vector<Component> components) : components_(std::move(components))
{
    if (components_.empty())
        throw std::invalid_argument("state space needs at least one component");
    for (const auto& c : components_)
    {
        if (!(c.weight > 0.0))
            throw std::invalid_argument("component weight must be positive");
        std::size_t bounded = c.kind == ComponentKind::SO2 ? 0 : (c.kind == ComponentKind::SE2 ? 2 : c.lower.size());
        if (c.lower.size() != bounded || c.upper.size() != bounded)
            throw std::invalid_argument("component bounds do not match its kind");
        for (std::size_t i = 0; i < bounded; ++i)
            if (!(c.lower[i] < c.upper[i]))
                throw std::invalid_argument("real vector bound requires lower < upper");
        offsets_.push_back(dim_);
        for (std::size_t i = 0; i < c.dim(); ++i)
        {
            bool angular = c.kind == ComponentKind::SO2 || (c.kind == ComponentKind::SE2 && i == 2);
            angular_.push_back(angular ? 1 : 0);
            coord_weights_.push_back(c.weight);
        }
        dim_ += c.dim();
    }
}

StateSpace StateSpace::unit_cube(std::size_t dim)
{
    return StateSpace({Component::box(dim, 0.0, 1.0)});
}

void StateSpace::require_member(const State& x, const char* what) const
{
    if (x.size() != dim_)
    {
        std::ostringstream msg;
        msg << what << ": state has " << x.size() << " coordinates, space " << describe() << " has " << dim_;
        throw std::invalid_argument(msg.str());
    }
}

double StateSpace::distance(const State& x, const State& y) const
{
    require_member(x, "distance");
    require_member(y, "distance");
    return distance(x.coords(), y.coords());
}

double StateSpace::distance(std::span<const double> x, std::span<const double> y) const
{
    double total = 0.0;
    for (std::size_t c = 0; c < components_.size(); ++c)
    {
        const Component& comp = components_[c];
        const std::size_t o = offsets_[c];
        double sq = 0.0;
        switch (comp.kind)
        {
            case ComponentKind::RealVector:
                for (std::size_t i = 0; i < comp.lower.size(); ++i)
                {
                    double d = x[o + i] - y[o + i];
                    sq += d * d;
                }
                break;
            case ComponentKind::SO2: {
                double d = angle_difference(x[o], y[o]);
                sq = d * d;
                break;
            }
            case ComponentKind::SE2: {
                double dx = x[o] - y[o];
                double dy = x[o + 1] - y[o + 1];
                double dt = angle_difference(x[o + 2], y[o + 2]);
                sq = dx * dx + dy * dy + dt * dt;
                break;
            }
        }
        total += comp.weight * comp.weight * sq;
    }
    return std::sqrt(total);
}

State StateSpace::interpolate(const State& x, const State& y, double t) const
{
    State out;
    interpolate(x, y, t, out);
    return out;
}

void StateSpace::interpolate(const State& x, const State& y, double t, State& out) const
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("interpolation parameter must lie in [0, 1]");
    require_member(x, "interpolate");
    require_member(y, "interpolate");
    if (t == 0.0)
    {
        out = x;
        return;
    }
    if (t == 1.0)
    {
        out = y;
        return;
    }
    out.values.resize(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
    {
        if (angular_[i])
            out[i] = normalize_angle(x[i] + t * angle_difference(x[i], y[i]));
        else
            out[i] = x[i] + t * (y[i] - x[i]);
    }
}

State StateSpace::sample_uniform(Rng& rng) const
{
    State s;
    s.values.resize(dim_);
    for (std::size_t c = 0; c < components_.size(); ++c)
    {
        const Component& comp = components_[c];
        const std::size_t o = offsets_[c];
        for (std::size_t i = 0; i < comp.lower.size(); ++i)
            s[o + i] = std::uniform_real_distribution<double>(comp.lower[i], comp.upper[i])(rng);
        if (comp.kind == ComponentKind::SO2)
            s[o] = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
        else if (comp.kind == ComponentKind::SE2)
            s[o + 2] = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    }
    return s;
}

double StateSpace::max_extent() const
{
    double sq = 0.0;
    for (const auto& c : components_)
    {
        double d = c.diameter();
        sq += c.weight * c.weight * d * d;
    }
    return std::sqrt(sq);
}

bool StateSpace::contains(const State& x, double tolerance) const
{
    if (x.size() != dim_)
        return false;
    for (std::size_t c = 0; c < components_.size(); ++c)
    {
        const Component& comp = components_[c];
        const std::size_t o = offsets_[c];
        for (std::size_t i = 0; i < comp.lower.size(); ++i)
            if (x[o + i] < comp.lower[i] - tolerance || x[o + i] > comp.upper[i] + tolerance)
                return false;
    }
    for (std::size_t i = 0; i < dim_; ++i)
        if (angular_[i] && (x[i] < -kPi || x[i] >= kPi))
            return false;
    return true;
}

void StateSpace::enforce_bounds(State& x) const
{
    require_member(x, "enforce_bounds");
    for (std::size_t c = 0; c < components_.size(); ++c)
    {
        const Component& comp = components_[c];
        const std::size_t o = offsets_[c];
        for (std::size_t i = 0; i < comp.lower.size(); ++i)
            x[o + i] = std::clamp(x[o + i], comp.lower[i], comp.upper[i]);
    }
    for (std::size_t i = 0; i < dim_; ++i)
        if (angular_[i])
            x[i] = normalize_angle(x[i]);
}

std::string StateSpace::describe() const
{
    std::ostringstream out;
    for (std::size_t c = 0; c < components_.size(); ++c)
    {
        if (c > 0)
            out << " x ";
        const Component& comp = components_[c];
        switch (comp.kind)
        {
            case ComponentKind::RealVector:
                out << "R^" << comp.lower.size();
                break;
            case ComponentKind::SO2:
                out << "SO2";
                break;
            case ComponentKind::SE2:
                out << "SE2";
                break;
        }
    }
    return out.str();
}

double path_length(const StateSpace& space, const Path& path)
{
    double len = 0.0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
        len += space.distance(path.waypoints[i - 1], path.waypoints[i]);
    return len;
}

std::vector<double> arc_fractions(const StateSpace& space, const Path& path)
{
    std::vector<double> fractions(path.waypoints.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
    {
        acc += space.distance(path.waypoints[i - 1], path.waypoints[i]);
        fractions[i] = acc;
    }
    if (acc > 0.0)
    {
        for (auto& f : fractions)
            f /= acc;
        fractions.back() = 1.0;
    }
    return fractions;
}

State path_point(const StateSpace& space, const Path& path, double t)
{
    if (path.waypoints.empty())
        throw std::invalid_argument("path has no waypoints");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("path parameter must lie in [0, 1]");
    if (path.waypoints.size() == 1)
        return path.waypoints.front();
    std::vector<double> knots = path.knots.empty() ? arc_fractions(space, path) : path.knots;
    if (knots.size() != path.waypoints.size())
        throw std::invalid_argument("path knots do not match its waypoints");
    if (knots.back() <= 0.0)
        return path.waypoints.front();
    // Last segment whose start knot is <= t.
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    std::size_t seg = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    if (seg >= knots.size() - 1)
        return path.waypoints.back();
    double span = knots[seg + 1] - knots[seg];
    double local = span > 0.0 ? std::clamp((t - knots[seg]) / span, 0.0, 1.0) : 1.0;
    return space.interpolate(path.waypoints[seg], path.waypoints[seg + 1], local);
}

}  // namespace fiberplan
