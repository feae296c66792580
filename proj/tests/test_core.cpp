#include <doctest.h>

#include "ccd/core.hpp"
#include "ccd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

using namespace ccd;

static Dataset make_data(int d, std::initializer_list<double> coords) {
    Dataset data;
    data.d = d;
    data.coords = coords;
    return data;
}

TEST_CASE("distance_matrix basics") {
    auto m = distance_matrix(make_data(2, {0, 0, 3, 4}));
    CHECK(m(0, 1) == doctest::Approx(5.0));
    CHECK(m(1, 0) == doctest::Approx(5.0));
    CHECK(m(0, 0) == 0.0);

    auto one = distance_matrix(make_data(3, {1, 2, 3}));
    CHECK(one.size() == 1);
    CHECK(one(0, 0) == 0.0);
}

TEST_CASE("distance_matrix matches per-pair recomputation") {
    Rng rng(11);
    Dataset data;
    data.d = 4;
    for (int i = 0; i < 5 * 4; ++i) data.coords.push_back(rng.uniform(-2, 2));
    auto m = distance_matrix(data);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double s = 0;
            for (int k = 0; k < 4; ++k) {
                double t = data.point(i)[k] - data.point(j)[k];
                s += t * t;
            }
            CHECK(m(i, j) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
        }
}

TEST_CASE("dataset validation rejects bad input") {
    Dataset bad;
    bad.d = 2;
    bad.coords = {1.0, 2.0, 3.0}; // not a multiple of d
    CHECK_THROWS_AS(distance_matrix(bad), std::invalid_argument);
    Dataset nan = make_data(1, {0.0});
    nan.coords[0] = std::nan("");
    CHECK_THROWS_AS(distance_matrix(nan), std::invalid_argument);
}

TEST_CASE("build_digraph arc rule") {
    auto m = distance_matrix(make_data(1, {0, 1}));
    SUBCASE("zero radii give no arcs") {
        auto g = build_digraph(m, {0.0, 0.0});
        CHECK(g.out[0].empty());
        CHECK(g.out[1].empty());
    }
    SUBCASE("asymmetric catch") {
        auto g = build_digraph(m, {2.0, 0.5});
        CHECK(g.out[0] == std::vector<int>{1});
        CHECK(g.out[1].empty());
    }
    SUBCASE("strict inequality: boundary not caught") {
        auto g = build_digraph(m, {1.0, 1.0});
        CHECK(g.out[0].empty());
    }
    CHECK_THROWS_AS(build_digraph(m, {1.0}), std::invalid_argument);
}

TEST_CASE("build_digraph equals brute force on random instances") {
    Rng rng(5);
    Dataset data;
    data.d = 3;
    for (int i = 0; i < 8 * 3; ++i) data.coords.push_back(rng.uniform(0, 1));
    auto m = distance_matrix(data);
    std::vector<double> radii;
    for (int i = 0; i < 8; ++i) radii.push_back(rng.uniform(0, 1));
    auto g = build_digraph(m, radii);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            bool arc = std::find(g.out[i].begin(), g.out[i].end(), (int)j) != g.out[i].end();
            CHECK(arc == (i != j && m(i, j) < radii[i]));
        }
}

static CatchDigraph digraph_from_arcs(std::size_t n, std::initializer_list<std::pair<int, int>> arcs) {
    CatchDigraph g;
    g.radii.assign(n, 1.0);
    g.out.assign(n, {});
    for (auto [a, b] : arcs) g.out[a].push_back(b);
    return g;
}

TEST_CASE("greedy_mds_v1 on simple digraphs") {
    // complete digraph on 4 vertices: lowest-index tie-break picks 0
    CatchDigraph k4;
    k4.radii.assign(4, 1.0);
    k4.out = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    auto s = greedy_mds_v1(k4);
    CHECK(s.members == std::vector<int>{0});

    // no arcs: everyone dominates only itself
    auto iso = digraph_from_arcs(3, {});
    CHECK(greedy_mds_v1(iso).members == std::vector<int>{0, 1, 2});
}

TEST_CASE("greedy_mds_v2 on simple digraphs") {
    // star: center catches all leaves
    auto star = digraph_from_arcs(5, {{2, 0}, {2, 1}, {2, 3}, {2, 4}});
    CHECK(greedy_mds_v2(star).members == std::vector<int>{2});

    // two disjoint complete digraphs: one hub each
    CatchDigraph two;
    two.radii.assign(4, 1.0);
    two.out = {{1}, {0}, {3}, {2}};
    auto s = greedy_mds_v2(two);
    CHECK(s.members.size() == 2);
    CHECK(is_dominating(two, s.members));
}

// every digraph on n vertices, via arc-set bitmask
static CatchDigraph nth_digraph(std::size_t n, unsigned long long mask) {
    CatchDigraph g;
    g.radii.assign(n, 1.0);
    g.out.assign(n, {});
    int bit = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (mask & (1ULL << bit)) g.out[i].push_back(static_cast<int>(j));
            ++bit;
        }
    return g;
}

static std::size_t exact_mds_size(const CatchDigraph& g) {
    std::size_t n = g.size();
    for (std::size_t k = 1; k <= n; ++k)
        for (unsigned subset = 0; subset < (1u << n); ++subset) {
            if (static_cast<std::size_t>(__builtin_popcount(subset)) != k) continue;
            std::vector<int> mem;
            for (std::size_t v = 0; v < n; ++v)
                if (subset & (1u << v)) mem.push_back(static_cast<int>(v));
            if (is_dominating(g, mem)) return k;
        }
    return n;
}

TEST_CASE("greedy bound vs exhaustive optimum on all small digraphs") {
    // all digraphs on 3 vertices, and a random slice of the 4-vertex family
    for (unsigned long long mask = 0; mask < (1ULL << 6); ++mask) {
        auto g = nth_digraph(3, mask);
        auto s = greedy_mds_v1(g);
        CHECK(is_dominating(g, s.members));
        CHECK(static_cast<double>(s.members.size()) <=
              (1.0 + std::log(3.0)) * static_cast<double>(exact_mds_size(g)) + 1e-9);
    }
    Rng rng(99);
    for (int trial = 0; trial < 400; ++trial) {
        auto mask = rng.next_u64() & ((1ULL << 12) - 1);
        auto g = nth_digraph(4, mask);
        auto s = greedy_mds_v1(g);
        CHECK(is_dominating(g, s.members));
        CHECK(static_cast<double>(s.members.size()) <=
              (1.0 + std::log(4.0)) * static_cast<double>(exact_mds_size(g)) + 1e-9);
    }
    for (int trial = 0; trial < 60; ++trial) {
        unsigned long long mask = Rng(1000 + trial).next_u64() & ((1ULL << 30) - 1);
        auto g = nth_digraph(6, mask);
        auto s = greedy_mds_v1(g);
        CHECK(is_dominating(g, s.members));
        CHECK(static_cast<double>(s.members.size()) <=
              (1.0 + std::log(6.0)) * static_cast<double>(exact_mds_size(g)) + 1e-9);
    }
}

TEST_CASE("greedy_mds_v2 always dominates random digraphs") {
    for (int trial = 0; trial < 200; ++trial) {
        unsigned long long mask = Rng(7 + trial).next_u64();
        auto g = nth_digraph(8, mask & ((1ULL << 56) - 1));
        auto s = greedy_mds_v2(g);
        CHECK(is_dominating(g, s.members));
    }
}

TEST_CASE("greedy_mds_scored reductions") {
    unsigned long long mask = 0x2d5a96ULL;
    auto g = nth_digraph(5, mask);
    // score = out-degree among uncovered reproduces v1
    auto score = [&](int v, const std::vector<char>& covered) {
        double deg = 0;
        for (int w : g.out[v])
            if (!covered[w]) deg += 1;
        return deg;
    };
    auto s3 = greedy_mds_scored(g, score, nullptr);
    auto s1 = greedy_mds_v1(g);
    CHECK(s3.members == s1.members);

    // constant score appends in index order
    auto flat = greedy_mds_scored(g, [](int, const std::vector<char>&) { return 1.0; }, nullptr);
    CHECK(is_dominating(g, flat.members));
    CHECK(std::is_sorted(flat.members.begin(), flat.members.end()));
}

TEST_CASE("connected_components") {
    std::vector<std::vector<int>> none(4);
    auto c = connected_components(4, none);
    CHECK(c == std::vector<int>{0, 1, 2, 3});

    std::vector<std::vector<int>> path{{1}, {0, 2}, {1}};
    c = connected_components(3, path);
    CHECK(c == std::vector<int>{0, 0, 0});
}

TEST_CASE("connected_components agrees with union-find on random graphs") {
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(42 + trial);
        std::size_t n = 10 + rng.index(40);
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        std::vector<std::vector<int>> adj(n);
        for (std::size_t e = 0; e < n; ++e) {
            int a = static_cast<int>(rng.index(n)), b = static_cast<int>(rng.index(n));
            if (a == b) continue;
            adj[a].push_back(b);
            adj[b].push_back(a);
            parent[find(a)] = find(b);
        }
        auto comp = connected_components(n, adj);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK((comp[i] == comp[j]) == (find((int)i) == find((int)j)));
    }
}
