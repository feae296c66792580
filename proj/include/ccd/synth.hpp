#pragma once

// Synthetic scenes: uniform hypersphere clusters, tail-calibrated Gaussian
// clusters, planted outliers, and Neyman-Scott (Matern / Thomas / mixed)
// cluster processes.

#include "ccd/core.hpp"
#include "ccd/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ccd {

enum class ClusterKind { uniform, gaussian };

enum class OutlierRule {
    big_sphere, // uniform in B(mean of centers, 5), >= min_center_dist from every center
    annulus,    // uniform between radii r1 and r2 around the origin
    collective  // uniform in B(mu0, 1) with mu0 = (3+shift, 3, ..., 3)
};

struct SceneSpec {
    int d = 2;
    std::size_t n = 100;
    std::vector<std::vector<double>> centers; // empty: standard layout for n_clusters
    std::size_t n_clusters = 2;
    double radius_min = 0.7, radius_max = 1.3;
    ClusterKind cluster_kind = ClusterKind::uniform;
    double contamination = 0.05;
    OutlierRule outlier_rule = OutlierRule::big_sphere;
    double outlier_sphere_radius = 5.0;
    double min_center_dist = 2.0;
    double annulus_r1 = 1.5, annulus_r2 = 3.0;
    double collective_shift = 0.0;
    double noise_level = 0.01; // Gaussian tail fraction outside radius R
    std::uint64_t seed = 0;
};

enum class ProcessKind { matern, thomas, mixed };

struct ProcessSpec {
    ProcessKind kind = ProcessKind::matern;
    int d = 2;
    double kappa = 6.0;       // parent intensity over the unit hypercube
    double mu = 33.0;         // mean offspring per parent
    double sigma = 0.1;       // Matern ball radius / Thomas sd
    double sigma2 = 0.07;     // second kernel scale (mixed: Thomas part)
    double outlier_intensity = 20.0;
    double min_outlier_dist_matern = 0.0; // 0: default 2*sigma
    double min_outlier_dist_thomas = 0.0; // 0: default 3.33*sigma
    std::size_t min_regular = 80;
    std::size_t max_scene_attempts = 100;
    std::uint64_t seed = 0;
};

std::vector<double> gen_uniform_cluster(const std::vector<double>& center, double R,
                                        std::size_t count, Rng& rng);

// N(center, s^2 I) with s chosen so that approximately noise_level of the mass
// falls outside B(center, R)
std::vector<double> gen_gaussian_cluster(const std::vector<double>& center, double R,
                                         std::size_t count, double noise_level, Rng& rng);

double gaussian_sigma_for_radius(double R, int d, double noise_level);

std::vector<double> gen_outliers(const SceneSpec& spec,
                                 const std::vector<std::vector<double>>& centers,
                                 std::size_t count, Rng& rng);

Dataset gen_scene(const SceneSpec& spec);

Dataset gen_neyman_scott(const ProcessSpec& spec);

// Standard center layouts: 2 clusters at (3,...,3) and (6,3,...,3); the 3-5
// cluster layouts used for d=3 and d=10 studies.
std::vector<std::vector<double>> standard_centers(std::size_t k, int d);

// Per-dimension mean-offspring calibrations targeting ~200-point scenes.
double neyman_scott_mu(ProcessKind kind, int d);

} // namespace ccd
