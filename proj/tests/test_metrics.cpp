#include <doctest.h>

#include "ccd/metrics.hpp"
#include "ccd/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace ccd;

TEST_CASE("confusion counts") {
    std::vector<int> truth{1, 1, 0, 0, 0};
    std::vector<int> flags{1, 0, 1, 0, 0};
    auto c = confusion(truth, flags);
    CHECK(c.tp == 1);
    CHECK(c.fn == 1);
    CHECK(c.fp == 1);
    CHECK(c.tn == 2);
    CHECK_THROWS_AS(confusion(truth, std::vector<int>{1, 0}), std::invalid_argument);
}

TEST_CASE("scores hand case") {
    Confusion c{.tp = 9, .fp = 2, .tn = 88, .fn = 1};
    auto s = scores(c, 2.0);
    CHECK(s.tpr == doctest::Approx(0.9));
    CHECK(s.tnr == doctest::Approx(88.0 / 90.0));
    CHECK(s.ba == doctest::Approx(0.5 * (0.9 + 88.0 / 90.0)));
    // F2 = 5*tp / (5*tp + 4*fn + fp)
    CHECK(s.f_beta == doctest::Approx(45.0 / 51.0).epsilon(1e-9));
    CHECK(s.f_beta == doctest::Approx(0.88235).epsilon(1e-4));
    CHECK_FALSE(s.degenerate);
}

TEST_CASE("degenerate confusions score zero with a flag") {
    auto s = scores(Confusion{.tp = 0, .fp = 0, .tn = 10, .fn = 0}, 2.0);
    CHECK(s.tpr == 0.0);
    CHECK(s.f_beta == 0.0);
    CHECK(s.degenerate);

    auto t = scores(Confusion{.tp = 0, .fp = 3, .tn = 7, .fn = 0}, 2.0);
    CHECK(t.f_beta == 0.0);
    CHECK(t.degenerate);
}

TEST_CASE("f_beta agrees with the direct formula on random confusions") {
    Rng rng(314);
    for (int trial = 0; trial < 1000; ++trial) {
        Confusion c;
        c.tp = static_cast<long>(rng.index(50));
        c.fn = static_cast<long>(rng.index(50));
        c.fp = static_cast<long>(rng.index(50));
        c.tn = static_cast<long>(rng.index(200));
        double beta = rng.uniform(0.1, 5.0);
        auto s = scores(c, beta);
        if (c.tp == 0) {
            CHECK(s.f_beta == 0.0);
            continue;
        }
        double prec = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
        double rec = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        double b2 = beta * beta;
        double expect = (1 + b2) * prec * rec / (b2 * prec + rec);
        CHECK(s.f_beta == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("f_beta limits: beta weights recall") {
    Confusion c{.tp = 8, .fp = 4, .tn = 86, .fn = 2};
    // beta -> 0 approaches precision, large beta approaches recall
    CHECK(scores(c, 1e-6).f_beta == doctest::Approx(8.0 / 12.0).epsilon(1e-6));
    CHECK(scores(c, 1e6).f_beta == doctest::Approx(0.8).epsilon(1e-6));
    CHECK_THROWS_AS(scores(c, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scores(c, -1.0), std::invalid_argument);
}
