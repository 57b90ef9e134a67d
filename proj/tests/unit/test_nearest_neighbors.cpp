#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "fiberplan/nearest_neighbors.hpp"

using namespace fiberplan;

namespace {

std::vector<Neighbor> brute_force(const StateSpace& s, const std::vector<State>& pts, const State& q, std::size_t k)
{
    std::vector<Neighbor> all;
    for (std::size_t i = 0; i < pts.size(); ++i)
        all.push_back({i, s.distance(pts[i], q)});
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    });
    all.resize(std::min(k, all.size()));
    return all;
}

}  // namespace

TEST_CASE("k nearest matches brute force")
{
    StateSpace s({Component::box(3, 0, 1), Component::so2(0.7)});
    NearestNeighbors nn(&s);
    std::vector<State> pts;
    Rng rng(1);
    for (std::size_t i = 0; i < 700; ++i)
    {
        pts.push_back(s.sample_uniform(rng));
        nn.add(i, pts.back());
        if (i % 97 == 0 || i > 690)
        {
            State q = s.sample_uniform(rng);
            for (std::size_t k : {1u, 5u, 17u})
            {
                auto got = nn.k_nearest(q, k);
                auto want = brute_force(s, pts, q, k);
                REQUIRE(got.size() == want.size());
                for (std::size_t j = 0; j < got.size(); ++j)
                {
                    CHECK(got[j].id == want[j].id);
                    CHECK(got[j].distance == doctest::Approx(want[j].distance));
                }
            }
        }
    }
}

TEST_CASE("excluded id is skipped and duplicates tie by id")
{
    StateSpace s = StateSpace::unit_cube(2);
    NearestNeighbors nn(&s);
    nn.add(0, State{0.5, 0.5});
    nn.add(1, State{0.5, 0.5});
    nn.add(2, State{0.9, 0.9});
    CHECK(nn.nearest(State{0.5, 0.5}).id == 0);
    auto r = nn.k_nearest(State{0.5, 0.5}, 2, 0);
    REQUIRE(r.size() == 2);
    CHECK(r[0].id == 1);
    CHECK(r[1].id == 2);
}
