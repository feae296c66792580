#include "ccd/synth.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccd {

std::vector<double> gen_uniform_cluster(const std::vector<double>& center, double R,
                                        std::size_t count, Rng& rng) {
    if (R <= 0.0) throw std::invalid_argument("gen_uniform_cluster: R must be > 0");
    int d = static_cast<int>(center.size());
    std::vector<double> out(count * d);
    std::vector<double> u(d);
    for (std::size_t i = 0; i < count; ++i) {
        unit_ball_point(rng, d, u.data());
        for (int k = 0; k < d; ++k) out[i * d + k] = center[k] + R * u[k];
    }
    return out;
}

double gaussian_sigma_for_radius(double R, int d, double noise_level) {
    if (R <= 0.0) throw std::invalid_argument("gaussian_sigma_for_radius: R must be > 0");
    if (noise_level <= 0.0 || noise_level >= 0.5)
        throw std::invalid_argument("gaussian_sigma_for_radius: noise_level out of (0, 0.5)");
    boost::math::chi_squared chi(d);
    double q = boost::math::quantile(chi, 1.0 - noise_level);
    return R / std::sqrt(q);
}

std::vector<double> gen_gaussian_cluster(const std::vector<double>& center, double R,
                                         std::size_t count, double noise_level, Rng& rng) {
    int d = static_cast<int>(center.size());
    double s = gaussian_sigma_for_radius(R, d, noise_level);
    std::vector<double> out(count * d);
    for (std::size_t i = 0; i < count; ++i)
        for (int k = 0; k < d; ++k) out[i * d + k] = center[k] + s * rng.normal();
    return out;
}

static constexpr std::size_t kRejectionCap = 1000000;

std::vector<double> gen_outliers(const SceneSpec& spec,
                                 const std::vector<std::vector<double>>& centers,
                                 std::size_t count, Rng& rng) {
    int d = spec.d;
    std::vector<double> out;
    out.reserve(count * d);
    std::vector<double> p(d), u(d);

    if (spec.outlier_rule == OutlierRule::big_sphere) {
        std::vector<double> mean(d, 0.0);
        for (const auto& c : centers)
            for (int k = 0; k < d; ++k) mean[k] += c[k];
        for (int k = 0; k < d; ++k) mean[k] /= centers.empty() ? 1.0 : centers.size();
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t iters = 0;
            for (;;) {
                if (++iters > kRejectionCap)
                    throw std::runtime_error("gen_outliers: rejection cap exceeded (infeasible spec)");
                unit_ball_point(rng, d, u.data());
                for (int k = 0; k < d; ++k) p[k] = mean[k] + spec.outlier_sphere_radius * u[k];
                bool ok = true;
                for (const auto& c : centers)
                    if (euclidean(p.data(), c.data(), d) < spec.min_center_dist) { ok = false; break; }
                if (ok) break;
            }
            out.insert(out.end(), p.begin(), p.end());
        }
    } else if (spec.outlier_rule == OutlierRule::annulus) {
        if (spec.annulus_r2 <= spec.annulus_r1)
            throw std::invalid_argument("gen_outliers: annulus radii must be ascending");
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t iters = 0;
            double r;
            do {
                if (++iters > kRejectionCap)
                    throw std::runtime_error("gen_outliers: rejection cap exceeded");
                r = spec.annulus_r2 * std::pow(rng.uniform01(), 1.0 / d);
            } while (r < spec.annulus_r1);
            unit_direction(rng, d, u.data());
            for (int k = 0; k < d; ++k) out.push_back(r * u[k]);
        }
    } else { // collective
        std::vector<double> mu0(d, 3.0);
        mu0[0] = 3.0 + spec.collective_shift;
        for (std::size_t i = 0; i < count; ++i) {
            unit_ball_point(rng, d, u.data());
            for (int k = 0; k < d; ++k) out.push_back(mu0[k] + u[k]);
        }
    }
    return out;
}

std::vector<std::vector<double>> standard_centers(std::size_t k, int d) {
    if (k < 1 || d < 1) throw std::invalid_argument("standard_centers: bad arguments");
    std::vector<std::vector<double>> centers;
    for (std::size_t j = 0; j < k; ++j) centers.emplace_back(d, 3.0);
    // cluster j >= 1 moves one coordinate out to 6
    for (std::size_t j = 1; j < k; ++j) {
        if (d == 3 && j == 4) { // fifth cluster in 3-space: (6,6,3)
            centers[j][0] = 6.0;
            centers[j][1] = 6.0;
        } else {
            centers[j][std::min<std::size_t>(j - 1, d - 1)] = 6.0;
        }
    }
    return centers;
}

Dataset gen_scene(const SceneSpec& spec) {
    if (spec.contamination < 0.0 || spec.contamination >= 1.0)
        throw std::invalid_argument("gen_scene: contamination out of [0,1)");
    if (spec.radius_min <= 0.0 || spec.radius_max < spec.radius_min)
        throw std::invalid_argument("gen_scene: bad radius range");
    Rng rng(spec.seed);
    auto centers = spec.centers.empty() ? standard_centers(spec.n_clusters, spec.d) : spec.centers;
    for (const auto& c : centers)
        if (static_cast<int>(c.size()) != spec.d)
            throw std::invalid_argument("gen_scene: center dimension mismatch");

    std::size_t n_out = static_cast<std::size_t>(std::lround(spec.contamination * spec.n));
    std::size_t n_reg = spec.n - n_out;
    std::size_t k = centers.size();
    Dataset data;
    data.d = spec.d;
    data.labels = std::vector<int>{};
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t cnt = n_reg / k + (j < n_reg % k ? 1 : 0);
        double R = rng.uniform(spec.radius_min, spec.radius_max);
        std::vector<double> pts = spec.cluster_kind == ClusterKind::uniform
            ? gen_uniform_cluster(centers[j], R, cnt, rng)
            : gen_gaussian_cluster(centers[j], R, cnt, spec.noise_level, rng);
        data.coords.insert(data.coords.end(), pts.begin(), pts.end());
        data.labels->insert(data.labels->end(), cnt, 0);
    }
    auto outs = gen_outliers(spec, centers, n_out, rng);
    data.coords.insert(data.coords.end(), outs.begin(), outs.end());
    data.labels->insert(data.labels->end(), n_out, 1);
    data.validate();
    return data;
}

double neyman_scott_mu(ProcessKind kind, int d) {
    static const int dims[5] = {2, 3, 5, 10, 20};
    static const double matern[5] = {33.00, 35.26, 37.45, 40.37, 44.48};
    static const double thomas[5] = {33.70, 36.13, 42.38, 55.16, 90.54};
    static const double mixed[5] = {33.30, 36.15, 39.72182, 46.78, 60.31};
    int best = 0;
    for (int i = 1; i < 5; ++i)
        if (std::abs(dims[i] - d) < std::abs(dims[best] - d)) best = i;
    switch (kind) {
        case ProcessKind::matern: return matern[best];
        case ProcessKind::thomas: return thomas[best];
        default: return mixed[best];
    }
}

static bool in_unit_cube(const double* p, int d) {
    for (int k = 0; k < d; ++k)
        if (p[k] < 0.0 || p[k] > 1.0) return false;
    return true;
}

Dataset gen_neyman_scott(const ProcessSpec& spec) {
    int d = spec.d;
    if (d < 1 || spec.kappa <= 0.0 || spec.mu <= 0.0 || spec.sigma <= 0.0)
        throw std::invalid_argument("gen_neyman_scott: bad spec");
    Rng rng(spec.seed);
    double min_dist_m = spec.min_outlier_dist_matern > 0.0 ? spec.min_outlier_dist_matern
                                                           : 2.0 * spec.sigma;
    double sigma_t = spec.kind == ProcessKind::mixed ? spec.sigma2 : spec.sigma;
    double min_dist_t = spec.min_outlier_dist_thomas > 0.0 ? spec.min_outlier_dist_thomas
                                                           : 3.33 * sigma_t;

    std::vector<double> p(d), u(d);
    for (std::size_t attempt = 0; attempt < spec.max_scene_attempts; ++attempt) {
        // parents: Poisson count, uniform in the unit hypercube; kind per parent
        std::vector<double> parents;
        std::vector<char> parent_thomas;
        auto add_parents = [&](int count, bool thomas) {
            for (int i = 0; i < count; ++i) {
                for (int k = 0; k < d; ++k) p[k] = rng.uniform01();
                parents.insert(parents.end(), p.begin(), p.end());
                parent_thomas.push_back(thomas ? 1 : 0);
            }
        };
        if (spec.kind == ProcessKind::matern) add_parents(rng.poisson(spec.kappa), false);
        else if (spec.kind == ProcessKind::thomas) add_parents(rng.poisson(spec.kappa), true);
        else {
            add_parents(rng.poisson(spec.kappa), false);
            add_parents(rng.poisson(spec.kappa), true);
        }

        std::vector<double> regular;
        for (std::size_t j = 0; j < parent_thomas.size(); ++j) {
            const double* par = parents.data() + j * d;
            int m = rng.poisson(spec.mu);
            for (int i = 0; i < m; ++i) {
                if (parent_thomas[j]) {
                    for (int k = 0; k < d; ++k) p[k] = par[k] + sigma_t * rng.normal();
                } else {
                    unit_ball_point(rng, d, u.data());
                    for (int k = 0; k < d; ++k) p[k] = par[k] + spec.sigma * u[k];
                }
                if (in_unit_cube(p.data(), d)) regular.insert(regular.end(), p.begin(), p.end());
            }
        }
        if (regular.size() / d < spec.min_regular) continue;

        // outliers: HPP thinned by minimum distance to every parent
        std::vector<double> outliers;
        int n_cand = rng.poisson(spec.outlier_intensity);
        for (int i = 0; i < n_cand; ++i) {
            for (int k = 0; k < d; ++k) p[k] = rng.uniform01();
            bool ok = true;
            for (std::size_t j = 0; j < parent_thomas.size() && ok; ++j) {
                double lim = parent_thomas[j] ? min_dist_t : min_dist_m;
                if (euclidean(p.data(), parents.data() + j * d, d) < lim) ok = false;
            }
            if (ok) outliers.insert(outliers.end(), p.begin(), p.end());
        }

        Dataset data;
        data.d = d;
        data.coords = std::move(regular);
        data.labels = std::vector<int>(data.size(), 0);
        data.coords.insert(data.coords.end(), outliers.begin(), outliers.end());
        data.labels->insert(data.labels->end(), outliers.size() / d, 1);
        data.validate();
        return data;
    }
    throw std::runtime_error("gen_neyman_scott: scene resampling did not converge");
}

} // namespace ccd
