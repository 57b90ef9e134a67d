#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fiberplan/spaces.hpp"

using namespace fiberplan;

namespace {

StateSpace plane()
{
    return StateSpace({Component::box(2, -10.0, 10.0)});
}

}  // namespace

TEST_CASE("euclidean distance on the plane")
{
    CHECK(plane().distance(State{0, 0}, State{3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("so2 distance wraps around")
{
    StateSpace s({Component::so2()});
    State a{normalize_angle(0.1)}, b{normalize_angle(2 * kPi - 0.1)};
    CHECK(s.distance(a, b) == doctest::Approx(0.2));
}

TEST_CASE("se2 compound distance")
{
    StateSpace s({Component::se2(-5, 5, -5, 5)});
    // position part and heading part each enter with weight 1
    double d = s.distance(State{0, 0, 0}, State{1, 0, normalize_angle(kPi)});
    CHECK(d == doctest::Approx(std::sqrt(1 + kPi * kPi)));
    CHECK(d == doctest::Approx(3.2969).epsilon(1e-4));
}

TEST_CASE("compound metric squares weights")
{
    StateSpace s({Component::box(1, 0, 10, 2.0), Component::box(1, 0, 10, 3.0)});
    // sqrt((2*1)^2 + (3*2)^2)
    CHECK(s.distance(State{0, 0}, State{1, 2}) == doctest::Approx(std::sqrt(4.0 + 36.0)));
}

TEST_CASE("distance is symmetric and zero only on equal states")
{
    StateSpace s({Component::box(2, 0, 1), Component::so2(), Component::se2(0, 1, 0, 1, 0.5)});
    Rng rng(3);
    for (int i = 0; i < 200; ++i)
    {
        State x = s.sample_uniform(rng), y = s.sample_uniform(rng);
        CHECK(s.distance(x, y) == doctest::Approx(s.distance(y, x)));
        CHECK(s.distance(x, y) > 0.0);
        CHECK(s.distance(x, x) == 0.0);
    }
}

TEST_CASE("interpolation endpoints and linearity")
{
    StateSpace line({Component::box(1, 0, 10)});
    CHECK(line.interpolate(State{0}, State{4}, 0.25)[0] == doctest::Approx(1.0));
    Rng rng(5);
    StateSpace s({Component::box(2, 0, 1), Component::so2()});
    for (int i = 0; i < 50; ++i)
    {
        State x = s.sample_uniform(rng), y = s.sample_uniform(rng);
        CHECK(s.interpolate(x, y, 0.0) == x);
        CHECK(s.interpolate(x, y, 1.0) == y);
    }
    CHECK_THROWS_AS(line.interpolate(State{0}, State{1}, 1.5), std::invalid_argument);
}

TEST_CASE("so2 interpolation crosses the seam")
{
    StateSpace s({Component::so2()});
    State a{-3.0}, b{3.0};
    State mid = s.interpolate(a, b, 0.5);
    CHECK(mid[0] == doctest::Approx(-kPi));
    // geodesic: distances add up through the midpoint
    CHECK(s.distance(a, mid) + s.distance(mid, b) == doctest::Approx(s.distance(a, b)));
}

TEST_CASE("uniform sampling stays in bounds and is reproducible")
{
    StateSpace s({Component::box(1, 0, 1)});
    Rng rng(11);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        State x = s.sample_uniform(rng);
        REQUIRE(s.contains(x));
        sum += x[0];
    }
    CHECK(sum / n > 0.49);
    CHECK(sum / n < 0.51);

    StateSpace c({Component::box(3, -1, 2), Component::so2()});
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i)
        CHECK(c.sample_uniform(a) == c.sample_uniform(b));
}

TEST_CASE("max extent")
{
    CHECK(StateSpace::unit_cube(2).max_extent() == doctest::Approx(std::sqrt(2.0)));
    CHECK(StateSpace({Component::so2()}).max_extent() == doctest::Approx(kPi));
    CHECK(StateSpace::unit_cube(100).max_extent() == doctest::Approx(10.0));
}

TEST_CASE("invalid components are rejected")
{
    CHECK_THROWS_AS(StateSpace({Component::box(1, 1, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(StateSpace({Component::box(1, 0, 1, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(plane().distance(State{0}, State{1, 2}), std::invalid_argument);
}

TEST_CASE("angles are normalized into [-pi, pi)")
{
    CHECK(normalize_angle(kPi) == doctest::Approx(-kPi));
    CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(angle_difference(3.0, -3.0) == doctest::Approx(2 * kPi - 6.0));
    State x{0, 0, 7.0};
    StateSpace s({Component::se2(-1, 1, -1, 1)});
    s.enforce_bounds(x);
    CHECK(s.contains(x));
}

TEST_CASE("path point follows arc length or knots")
{
    StateSpace line({Component::box(1, 0, 10)});
    Path p{{State{0}, State{1}, State{4}}, {}};
    CHECK(path_length(line, p) == doctest::Approx(4.0));
    CHECK(path_point(line, p, 0.5)[0] == doctest::Approx(2.0));
    p.knots = {0.0, 0.5, 1.0};
    CHECK(path_point(line, p, 0.5)[0] == doctest::Approx(1.0));
    CHECK(path_point(line, p, 0.75)[0] == doctest::Approx(2.5));
}
