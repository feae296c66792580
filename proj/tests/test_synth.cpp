#include <doctest.h>

#include "ccd/csr.hpp"
#include "ccd/synth.hpp"

#include <cmath>
#include <stdexcept>

using namespace ccd;

namespace {

double norm_to(const double* p, const std::vector<double>& c) {
    double s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += (p[k] - c[k]) * (p[k] - c[k]);
    return std::sqrt(s);
}

} // namespace

TEST_CASE("gen_uniform_cluster support and radial law") {
    Rng rng(1);
    std::vector<double> center{3.0, -1.0};
    const std::size_t n = 20000;
    auto pts = gen_uniform_cluster(center, 2.0, n, rng);
    REQUIRE(pts.size() == n * 2);
    double sum_r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = norm_to(&pts[i * 2], center);
        CHECK(r <= 2.0);
        sum_r += r;
    }
    // E[r] = R * d/(d+1) = 4/3 for a uniform ball in the plane
    CHECK(sum_r / n == doctest::Approx(4.0 / 3.0).epsilon(0.02));
    CHECK_THROWS_AS(gen_uniform_cluster(center, 0.0, 1, rng), std::invalid_argument);
}

TEST_CASE("gaussian_sigma_for_radius quantile calibration") {
    // chi-square df=2, p=0.99 quantile
    double q = 1.0 / std::pow(gaussian_sigma_for_radius(1.0, 2, 0.01), 2);
    CHECK(q == doctest::Approx(9.21034).epsilon(1e-5));
    CHECK(gaussian_sigma_for_radius(3.0, 2, 0.01) ==
          doctest::Approx(3.0 / std::sqrt(9.21034)).epsilon(1e-5));
    CHECK_THROWS_AS(gaussian_sigma_for_radius(1.0, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_sigma_for_radius(1.0, 2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_sigma_for_radius(-1.0, 2, 0.01), std::invalid_argument);
}

TEST_CASE("gen_gaussian_cluster tail mass matches noise level") {
    Rng rng(2);
    std::vector<double> center{0.0, 0.0, 0.0};
    const std::size_t n = 100000;
    auto pts = gen_gaussian_cluster(center, 1.5, n, 0.01, rng);
    std::size_t outside = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (norm_to(&pts[i * 3], center) > 1.5) ++outside;
    CHECK(static_cast<double>(outside) / n == doctest::Approx(0.01).epsilon(0.3));
    CHECK(std::abs(static_cast<double>(outside) / n - 0.01) < 0.003);
}

TEST_CASE("standard_centers layouts") {
    auto c2 = standard_centers(2, 2);
    REQUIRE(c2.size() == 2);
    CHECK(c2[0] == std::vector<double>{3, 3});
    CHECK(c2[1] == std::vector<double>{6, 3});

    auto c3 = standard_centers(3, 10);
    CHECK(c3[1][0] == 6.0);
    CHECK(c3[2][1] == 6.0);
    CHECK(c3[2][0] == 3.0);

    auto c5 = standard_centers(5, 3);
    CHECK(c5[4] == std::vector<double>{6, 6, 3}); // fifth cluster special-case
    CHECK(c5[3] == std::vector<double>{3, 3, 6});

    CHECK_THROWS_AS(standard_centers(0, 2), std::invalid_argument);
}

TEST_CASE("gen_outliers rules") {
    SceneSpec spec;
    spec.d = 2;
    spec.seed = 3;
    auto centers = standard_centers(2, 2);
    Rng rng(3);

    SUBCASE("big sphere keeps distance from every center") {
        auto outs = gen_outliers(spec, centers, 50, rng);
        std::vector<double> mean{4.5, 3.0};
        for (std::size_t i = 0; i < 50; ++i) {
            const double* p = &outs[i * 2];
            CHECK(norm_to(p, mean) <= spec.outlier_sphere_radius + 1e-12);
            for (const auto& c : centers) CHECK(norm_to(p, c) >= spec.min_center_dist);
        }
    }
    SUBCASE("annulus shell around the origin") {
        spec.outlier_rule = OutlierRule::annulus;
        auto outs = gen_outliers(spec, centers, 50, rng);
        for (std::size_t i = 0; i < 50; ++i) {
            double r = norm_to(&outs[i * 2], {0.0, 0.0});
            CHECK(r >= spec.annulus_r1);
            CHECK(r <= spec.annulus_r2 + 1e-12);
        }
        spec.annulus_r2 = spec.annulus_r1;
        CHECK_THROWS_AS(gen_outliers(spec, centers, 1, rng), std::invalid_argument);
    }
    SUBCASE("collective clump near the shifted center") {
        spec.outlier_rule = OutlierRule::collective;
        spec.collective_shift = 2.0;
        auto outs = gen_outliers(spec, centers, 50, rng);
        std::vector<double> mu0{5.0, 3.0};
        for (std::size_t i = 0; i < 50; ++i) CHECK(norm_to(&outs[i * 2], mu0) <= 1.0 + 1e-12);
    }
}

TEST_CASE("gen_scene sizes, labels, determinism") {
    SceneSpec spec;
    spec.d = 2;
    spec.n = 103;
    spec.n_clusters = 2;
    spec.contamination = 0.05;
    spec.seed = 11;
    auto data = gen_scene(spec);
    REQUIRE(data.size() == 103);
    REQUIRE(data.labels.has_value());
    std::size_t n_out = 0;
    for (int l : *data.labels) n_out += l;
    CHECK(n_out == 5); // lround(0.05 * 103)
    // regulars first, outliers last
    CHECK(data.labels->front() == 0);
    CHECK(data.labels->back() == 1);
    // 98 regulars split 49/49; remainder (odd regular counts) go to early clusters
    std::vector<double> c0{3, 3}, c1{6, 3};
    for (std::size_t i = 0; i < 49; ++i) CHECK(norm_to(data.point(i), c0) <= 1.3);
    for (std::size_t i = 49; i < 98; ++i) CHECK(norm_to(data.point(i), c1) <= 1.3);

    auto again = gen_scene(spec);
    CHECK(again.coords == data.coords);
    spec.seed = 12;
    CHECK(gen_scene(spec).coords != data.coords);

    spec.contamination = 1.0;
    CHECK_THROWS_AS(gen_scene(spec), std::invalid_argument);
}

TEST_CASE("gen_scene remainder split across clusters") {
    SceneSpec spec;
    spec.d = 2;
    spec.n = 100;
    spec.n_clusters = 3;
    spec.contamination = 0.0;
    spec.seed = 5;
    auto data = gen_scene(spec);
    auto centers = standard_centers(3, 2);
    std::vector<std::size_t> counts(3, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < 3; ++j)
            if (norm_to(data.point(i), centers[j]) < norm_to(data.point(i), centers[best])) best = j;
        ++counts[best];
    }
    CHECK(counts == std::vector<std::size_t>{34, 33, 33});
}

TEST_CASE("neyman_scott_mu nearest-dimension lookup") {
    CHECK(neyman_scott_mu(ProcessKind::matern, 2) == doctest::Approx(33.00));
    CHECK(neyman_scott_mu(ProcessKind::thomas, 10) == doctest::Approx(55.16));
    CHECK(neyman_scott_mu(ProcessKind::mixed, 5) == doctest::Approx(39.72182));
    CHECK(neyman_scott_mu(ProcessKind::matern, 4) == doctest::Approx(35.26)); // tie -> lower dim
    CHECK(neyman_scott_mu(ProcessKind::matern, 7) == doctest::Approx(37.45)); // nearest is 5
    CHECK(neyman_scott_mu(ProcessKind::thomas, 100) == doctest::Approx(90.54));
}

TEST_CASE("gen_neyman_scott support, labels, determinism") {
    ProcessSpec spec;
    spec.kind = ProcessKind::matern;
    spec.d = 2;
    spec.mu = neyman_scott_mu(ProcessKind::matern, 2);
    spec.seed = 17;
    auto data = gen_neyman_scott(spec);
    REQUIRE(data.labels.has_value());
    std::size_t n_reg = 0;
    for (int l : *data.labels) n_reg += (l == 0);
    CHECK(n_reg >= spec.min_regular);
    for (std::size_t i = 0; i < data.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            CHECK(data.point(i)[k] >= 0.0);
            CHECK(data.point(i)[k] <= 1.0);
        }
    auto again = gen_neyman_scott(spec);
    CHECK(again.coords == data.coords);

    spec.sigma = 0.0;
    CHECK_THROWS_AS(gen_neyman_scott(spec), std::invalid_argument);
}

TEST_CASE("gen_neyman_scott mean regular count near calibration target") {
    for (auto kind : {ProcessKind::matern, ProcessKind::thomas, ProcessKind::mixed}) {
        ProcessSpec spec;
        spec.kind = kind;
        spec.d = 2;
        spec.kappa = kind == ProcessKind::mixed ? 3.0 : 6.0;
        spec.sigma = kind == ProcessKind::thomas ? 0.07 : 0.1;
        spec.sigma2 = 0.07;
        spec.mu = neyman_scott_mu(kind, 2);
        double total = 0;
        const int reps = 150;
        for (int r = 0; r < reps; ++r) {
            spec.seed = 400 + r;
            auto data = gen_neyman_scott(spec);
            for (int l : *data.labels) total += (l == 0);
        }
        CHECK(total / reps == doctest::Approx(200.0).epsilon(0.075));
    }
}
