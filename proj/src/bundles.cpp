// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/bundles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fiberplan {

ComponentProjection ProjectionSpec::parse_tag(const std::string& tag)
{
    if (tag == "identity")
        return {ProjectionTag::Identity, 0};
    if (tag == "drop")
        return {ProjectionTag::Drop, 0};
    if (tag == "se2_to_r2")
        return {ProjectionTag::SE2ToR2, 0};
    const std::string prefix = "prefix:";
    if (tag.rfind(prefix, 0) == 0)
    {
        std::size_t pos = 0;
        std::string digits = tag.substr(prefix.size());
        unsigned long m = 0;
        try
        {
            m = std::stoul(digits, &pos);
        }
        catch (const std::exception&)
        {
            pos = 0;
        }
        if (pos == 0 || pos != digits.size() || m == 0)
            throw std::invalid_argument("malformed projection tag '" + tag + "'");
        return {ProjectionTag::RNPrefix, static_cast<std::size_t>(m)};
    }
    throw std::invalid_argument("unknown projection tag '" + tag + "'");
}

std::string ProjectionSpec::tag_name(const ComponentProjection& p)
{
    switch (p.tag)
    {
        case ProjectionTag::Identity:
            return "identity";
        case ProjectionTag::Drop:
            return "drop";
        case ProjectionTag::SE2ToR2:
            return "se2_to_r2";
        case ProjectionTag::RNPrefix:
            return "prefix:" + std::to_string(p.prefix);
    }
    return "?";
}

Bundle::Bundle(StateSpace total, ProjectionSpec spec) : total_(std::move(total)), spec_(std::move(spec))
{
    const auto& comps = total_.components();
    if (spec_.components.size() != comps.size())
        throw std::invalid_argument("projection spec needs one entry per total-space component");

    std::vector<Component> base, fiber;
    bool reduces = false;
    for (std::size_t c = 0; c < comps.size(); ++c)
    {
        const Component& comp = comps[c];
        const ComponentProjection& p = spec_.components[c];
        const std::size_t o = total_.offset(c);
        switch (p.tag)
        {
            case ProjectionTag::Identity:
                base.push_back(comp);
                for (std::size_t i = 0; i < comp.dim(); ++i)
                    base_coords_.push_back(o + i);
                break;
            case ProjectionTag::Drop:
                reduces = true;
                fiber.push_back(comp);
                for (std::size_t i = 0; i < comp.dim(); ++i)
                    fiber_coords_.push_back(o + i);
                break;
            case ProjectionTag::SE2ToR2:
                if (comp.kind != ComponentKind::SE2)
                    throw std::invalid_argument("se2_to_r2 applies to SE2 components only");
                reduces = true;
                base.push_back(Component::real_vector(comp.lower, comp.upper, comp.weight));
                fiber.push_back(Component::so2(comp.weight));
                base_coords_.push_back(o);
                base_coords_.push_back(o + 1);
                fiber_coords_.push_back(o + 2);
                break;
            case ProjectionTag::RNPrefix: {
                if (comp.kind != ComponentKind::RealVector)
                    throw std::invalid_argument("prefix projection applies to real vector components only");
                const std::size_t n = comp.dim();
                if (p.prefix == 0 || p.prefix >= n)
                    throw std::invalid_argument("prefix projection needs 0 < m < component dimension");
                reduces = true;
                base.push_back(Component::real_vector(
                    std::vector<double>(comp.lower.begin(), comp.lower.begin() + p.prefix),
                    std::vector<double>(comp.upper.begin(), comp.upper.begin() + p.prefix), comp.weight));
                fiber.push_back(Component::real_vector(
                    std::vector<double>(comp.lower.begin() + p.prefix, comp.lower.end()),
                    std::vector<double>(comp.upper.begin() + p.prefix, comp.upper.end()), comp.weight));
                for (std::size_t i = 0; i < n; ++i)
                    (i < p.prefix ? base_coords_ : fiber_coords_).push_back(o + i);
                break;
            }
        }
    }
    if (!reduces && !spec_.identity_bundle)
        throw std::invalid_argument("projection spec does not reduce the space; flag it as an identity bundle");
    if (base.empty())
        throw std::invalid_argument("projection spec leaves an empty base space");
    base_ = StateSpace(std::move(base));
    if (!fiber.empty())
        fiber_ = StateSpace(std::move(fiber));
}

Bundle Bundle::mobius()
{
    StateSpace strip({Component::so2(), Component::box(1, 0.0, 1.0)});
    ProjectionSpec spec{{{ProjectionTag::Identity, 0}, {ProjectionTag::Drop, 0}}, false};
    Bundle b(std::move(strip), std::move(spec));
    b.twist_ = Twist::Mobius;
    return b;
}

State Bundle::project(const State& x) const
{
    total_.require_member(x, "project");
    State b;
    b.values.reserve(base_coords_.size());
    for (std::size_t i : base_coords_)
        b.values.push_back(x[i]);
    return b;
}

State Bundle::project_fiber(const State& x) const
{
    total_.require_member(x, "project_fiber");
    State f;
    f.values.reserve(fiber_coords_.size());
    for (std::size_t i : fiber_coords_)
        f.values.push_back(x[i]);
    return f;
}

State Bundle::lift(const State& b, const State& f) const
{
    base_.require_member(b, "lift (base)");
    if (f.size() != fiber_coords_.size())
        throw std::invalid_argument("lift: fiber element has wrong arity");
    State x;
    x.values.resize(total_.dim());
    for (std::size_t i = 0; i < base_coords_.size(); ++i)
        x[base_coords_[i]] = b[i];
    for (std::size_t i = 0; i < fiber_coords_.size(); ++i)
        x[fiber_coords_[i]] = f[i];
    return x;
}

State Bundle::interpolate_total(const State& x, const State& y, double t) const
{
    if (twist_ == Twist::Mobius)
        return interpolate_total_mobius(x, y, t);
    return total_.interpolate(x, y, t);
}

State interpolate_total_mobius(const State& x, const State& y, double t)
{
    if (x.size() != 2 || y.size() != 2)
        throw std::invalid_argument("mobius states are (theta, u)");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("interpolation parameter must lie in [0, 1]");
    if (t == 0.0)
        return x;
    if (t == 1.0)
        return y;
    const double delta = angle_difference(x[0], y[0]);
    const double unwrapped_target = x[0] + delta;
    const bool arc_crosses_seam = unwrapped_target >= kPi || unwrapped_target < -kPi;
    // Target fiber coordinate as seen from x's side of the seam.
    const double target_u = arc_crosses_seam ? 1.0 - y[1] : y[1];
    const double theta = x[0] + t * delta;
    const double u = x[1] + t * (target_u - x[1]);
    const bool crossed = theta >= kPi || theta < -kPi;
    return State{normalize_angle(theta), crossed ? 1.0 - u : u};
}

BundleSequence::BundleSequence(StateSpace top) : spaces_{std::move(top)} {}

BundleSequence::BundleSequence(std::vector<Bundle> bundles) : bundles_(std::move(bundles))
{
    if (bundles_.empty())
        throw std::invalid_argument("bundle sequence needs at least one bundle; use the single-space constructor");
    spaces_.push_back(bundles_.front().base());
    for (std::size_t k = 0; k < bundles_.size(); ++k)
    {
        if (!(bundles_[k].base() == spaces_.back()))
        {
            std::ostringstream msg;
            msg << "bundle sequence broken at level " << k + 1 << ": base " << bundles_[k].base().describe()
                << " differs from total " << spaces_.back().describe();
            throw std::invalid_argument(msg.str());
        }
        spaces_.push_back(bundles_[k].total());
    }
}

BundleSequence BundleSequence::from_specs(const StateSpace& top, const std::vector<ProjectionSpec>& specs)
{
    if (specs.empty())
        return BundleSequence(top);
    std::vector<Bundle> topdown;
    StateSpace current = top;
    for (const auto& spec : specs)
    {
        topdown.emplace_back(current, spec);
        current = topdown.back().base();
    }
    std::reverse(topdown.begin(), topdown.end());
    return BundleSequence(std::move(topdown));
}

State BundleSequence::project_to(std::size_t k, const State& top) const
{
    State x = top;
    for (std::size_t j = spaces_.size() - 1; j > k; --j)
        x = bundles_[j - 1].project(x);
    return x;
}

std::vector<std::size_t> BundleSequence::coords_at(std::size_t k) const
{
    std::vector<std::size_t> coords(spaces_.back().dim());
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] = i;
    for (std::size_t j = spaces_.size() - 1; j > k; --j)
    {
        const auto& keep = bundles_[j - 1].base_coords();
        std::vector<std::size_t> next(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            next[i] = coords[keep[i]];
        coords = std::move(next);
    }
    return coords;
}

std::size_t check_admissible(const Bundle& bundle, const ValidityFn& valid_total, const ValidityFn& valid_base,
                             std::size_t samples, Rng& rng)
{
    std::size_t violations = 0;
    for (std::size_t i = 0; i < samples; ++i)
    {
        State x = bundle.total().sample_uniform(rng);
        if (valid_total(x) && !valid_base(bundle.project(x)))
            ++violations;
    }
    return violations;
}

namespace {

void require_endpoints(const Bundle& bundle, const Path& base_path, const State& x1, const State& x2)
{
    if (base_path.waypoints.empty())
        throw std::invalid_argument("section: base path is empty");
    const StateSpace& base = bundle.base();
    if (base.distance(bundle.project(x1), base_path.waypoints.front()) > kSectionTolerance ||
        base.distance(bundle.project(x2), base_path.waypoints.back()) > kSectionTolerance)
        throw std::invalid_argument("section: endpoint projections do not match the base path");
}

/// Arc-length fractions, or index-uniform fractions for a zero-length path.
std::vector<double> base_fractions(const StateSpace& base, const Path& base_path)
{
    std::vector<double> s = arc_fractions(base, base_path);
    if (s.size() >= 2 && s.back() < 1.0)
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] = static_cast<double>(i) / static_cast<double>(s.size() - 1);
    return s;
}

Path with_two_waypoints(const Path& p)
{
    Path out{p.waypoints, {}};
    if (out.waypoints.size() == 1)
        out.waypoints.push_back(out.waypoints.front());
    return out;
}

}  // namespace

Path section_l2(const Bundle& bundle, const Path& base_path, const State& x1, const State& x2)
{
    require_endpoints(bundle, base_path, x1, x2);
    const Path base = with_two_waypoints(base_path);
    const State f1 = bundle.project_fiber(x1);
    const State f2 = bundle.project_fiber(x2);
    const std::vector<double> s = base_fractions(bundle.base(), base);

    Path section;
    for (std::size_t i = 0; i < base.waypoints.size(); ++i)
    {
        State f = bundle.fiber().dim() > 0 ? bundle.fiber().interpolate(f1, f2, s[i]) : State{};
        section.waypoints.push_back(bundle.lift(base.waypoints[i], f));
        section.knots.push_back(s[i]);
    }
    section.waypoints.front() = x1;
    section.waypoints.back() = x2;
    return section;
}

Path section_l1(const Bundle& bundle, const Path& base_path, const State& x1, const State& x2, SectionFlavor flavor)
{
    require_endpoints(bundle, base_path, x1, x2);
    const Path base = with_two_waypoints(base_path);
    const State f1 = bundle.project_fiber(x1);
    const State f2 = bundle.project_fiber(x2);
    const std::vector<double> s = base_fractions(bundle.base(), base);
    const std::size_t n = base.waypoints.size();

    Path section;
    if (flavor == SectionFlavor::FiberFirst)
    {
        section.waypoints.push_back(x1);
        section.knots.push_back(0.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            section.waypoints.push_back(bundle.lift(base.waypoints[i], f2));
            section.knots.push_back(0.5 + 0.5 * s[i]);
        }
    }
    else
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            section.waypoints.push_back(bundle.lift(base.waypoints[i], f1));
            section.knots.push_back(0.5 * s[i]);
        }
        section.waypoints.push_back(x2);
        section.knots.push_back(1.0);
    }
    section.waypoints.front() = x1;
    section.waypoints.back() = x2;
    return section;
}

}  // namespace fiberplan
