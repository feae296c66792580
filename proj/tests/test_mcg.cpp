#include <doctest.h>

#include "ccd/ccd.hpp"
#include "ccd/mcg.hpp"
#include "ccd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace ccd;

namespace {

Dataset two_clumps(std::size_t per, double gap, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    data.d = 2;
    std::vector<double> a = gen_uniform_cluster({0.0, 0.0}, 1.0, per, rng);
    std::vector<double> b = gen_uniform_cluster({gap, 0.0}, 1.0, per, rng);
    data.coords = a;
    data.coords.insert(data.coords.end(), b.begin(), b.end());
    return data;
}

} // namespace

TEST_CASE("build_mcg matches the mutual-catch definition") {
    Rng rng(8);
    Dataset data;
    data.d = 2;
    for (int i = 0; i < 12 * 2; ++i) data.coords.push_back(rng.uniform(0, 2));
    auto dist = distance_matrix(data);
    CatchDigraph g;
    for (int i = 0; i < 12; ++i) g.radii.push_back(rng.uniform(0, 1.5));
    g.out.assign(12, {});
    auto m = build_mcg(g, dist);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(std::is_sorted(m.adj[i].begin(), m.adj[i].end()));
        for (std::size_t j = 0; j < 12; ++j) {
            bool edge = std::find(m.adj[i].begin(), m.adj[i].end(), (int)j) != m.adj[i].end();
            bool expect = i != j && dist(i, j) < std::min(g.radii[i], g.radii[j]);
            CHECK(edge == expect);
            // symmetry
            bool rev = std::find(m.adj[j].begin(), m.adj[j].end(), (int)i) != m.adj[j].end();
            CHECK(edge == rev);
        }
    }
}

TEST_CASE("build_mcg_subset agrees with the full graph on the identity subset") {
    Rng rng(9);
    Dataset data;
    data.d = 3;
    for (int i = 0; i < 10 * 3; ++i) data.coords.push_back(rng.uniform(0, 1));
    auto dist = distance_matrix(data);
    CatchDigraph g;
    for (int i = 0; i < 10; ++i) g.radii.push_back(rng.uniform(0, 1));
    g.out.assign(10, {});
    std::vector<int> ids(10);
    std::iota(ids.begin(), ids.end(), 0);
    auto full = build_mcg(g, dist);
    auto sub = build_mcg_subset(ids, g.radii, dist);
    CHECK(full.adj == sub.adj);

    // strict subset relabels locally
    std::vector<int> some{1, 4, 7};
    auto s = build_mcg_subset(some, {0.5, 0.5, 0.5}, dist);
    CHECK(s.adj.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (int j : s.adj[i])
            CHECK(dist(some[i], some[j]) < 0.5);

    CHECK_THROWS_AS(build_mcg_subset(some, {0.5, 0.5}, dist), std::invalid_argument);
}

TEST_CASE("dmcg_calibrate argument checks and trivial cases") {
    auto data = two_clumps(10, 8.0, 3);
    auto dist = distance_matrix(data);
    CHECK_THROWS_AS(dmcg_calibrate({}, dist, 2, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(dmcg_calibrate({0}, dist, 2, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(dmcg_calibrate({0}, dist, 2, 1.0, 0.0), std::invalid_argument);
    auto one = dmcg_calibrate({3}, dist, 2, 7.5, 0.1);
    CHECK(one.delta == 7.5);
    CHECK_FALSE(one.hit_floor);
}

TEST_CASE("dmcg_calibrate finds the first connected grid value") {
    auto data = two_clumps(20, 8.0, 4);
    auto dist = distance_matrix(data);
    std::vector<int> left(20);
    std::iota(left.begin(), left.end(), 0);

    double delta0 = 2.0 * 20 / (M_PI * 1.0); // ~ twice the clump density
    double step = delta0 / 50.0;
    auto res = dmcg_calibrate(left, dist, 2, delta0, step);
    CHECK_FALSE(res.hit_floor);
    CHECK(res.delta > 0.0);
    CHECK(res.delta <= delta0);

    // the returned value connects; one grid step tighter must not (else the
    // scan would have stopped earlier)
    auto connected_at = [&](double delta) {
        auto radii = ks_radii_subset(left, dist, delta, 2);
        auto m = build_mcg_subset(left, radii, dist);
        auto comp = connected_components(left.size(), m.adj);
        return *std::max_element(comp.begin(), comp.end()) == 0;
    };
    CHECK(connected_at(res.delta));
    if (res.delta + step <= delta0 + 1e-12) CHECK_FALSE(connected_at(res.delta + step));
}

TEST_CASE("dmcg_calibrate flags grid exhaustion") {
    auto data = two_clumps(10, 50.0, 5);
    auto dist = distance_matrix(data);
    std::vector<int> all(20);
    std::iota(all.begin(), all.end(), 0);
    // one-value grid at a density far too high for the 50-unit gap
    auto res = dmcg_calibrate(all, dist, 2, 500.0, 1000.0);
    CHECK(res.hit_floor);
    CHECK(res.delta == 500.0);
}

TEST_CASE("dmcg_full splits separated clumps and isolates planted points") {
    auto data = two_clumps(25, 10.0, 6);
    // plus 3 far-off isolated points
    for (double x : {20.0, 25.0, 30.0}) {
        data.coords.push_back(x);
        data.coords.push_back(15.0);
    }
    auto dist = distance_matrix(data);
    std::size_t n = data.size();

    auto null_sampler = [n](Rng& rng) {
        Dataset sim;
        sim.d = 2;
        sim.coords.resize(n * 2);
        for (std::size_t i = 0; i < n; ++i) unit_ball_point(rng, 2, sim.point(i));
        return sim;
    };
    double delta0 = 2.0 * static_cast<double>(n) / M_PI;
    auto res = dmcg_full(data, dist, null_sampler, delta0, delta0 / 50.0, 20, 0.1, 77);
    CHECK_FALSE(res.single_component);
    CHECK(res.delta_alpha > 0.0);
    // each planted isolated point sits in its own singleton component
    for (int id : {50, 51, 52}) {
        bool found = false;
        for (const auto& comp : res.components)
            if (comp.size() == 1 && comp[0] == id) found = true;
        CHECK(found);
    }
    // the two clumps land in two large components
    std::size_t big = 0;
    for (const auto& comp : res.components)
        if (comp.size() >= 20) ++big;
    CHECK(big == 2);

    CHECK_THROWS_AS(dmcg_full(data, dist, null_sampler, delta0, delta0 / 50.0, 0, 0.1, 1),
                    std::invalid_argument);
}

TEST_CASE("dmcg_full keeps one clump whole most of the time") {
    // null-distributed data should survive the delta_alpha cut ~90% of the time
    const std::size_t n = 45;
    auto null_sampler = [](Rng& r) {
        Dataset sim;
        sim.d = 2;
        sim.coords.resize(n * 2);
        for (std::size_t i = 0; i < n; ++i) unit_ball_point(r, 2, sim.point(i));
        return sim;
    };
    double delta0 = 2.0 * static_cast<double>(n) / M_PI;
    int whole = 0;
    for (std::uint64_t trial = 0; trial < 12; ++trial) {
        Rng rng(100 + trial);
        Dataset data;
        data.d = 2;
        data.coords = gen_uniform_cluster({0.0, 0.0}, 1.0, n, rng);
        auto dist = distance_matrix(data);
        auto res = dmcg_full(data, dist, null_sampler, delta0, delta0 / 50.0, 20, 0.1, trial);
        std::size_t biggest = 0;
        for (const auto& comp : res.components) biggest = std::max(biggest, comp.size());
        CHECK(biggest >= n - 4); // never shatters
        if (res.single_component) ++whole;
    }
    CHECK(whole >= 7);
}
