#pragma once

// Complete-spatial-randomness tests used for radius selection:
//  - Ripley's K Monte Carlo envelope test (RK radii)
//  - mean/median nearest-neighbor-distance Monte Carlo test (UN radii)
// plus Clark-Evans closed forms for HPP nearest-neighbor distances.

#include "ccd/core.hpp"
#include "ccd/rng.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace ccd {

// volume of B(0, r) in R^d
double unit_ball_volume(int d, double r = 1.0);

inline const std::vector<double>& default_t_grid() {
    static const std::vector<double> g{0.1, 0.2, 0.3, 0.4, 0.5};
    return g;
}

enum class CsrVerdict { retain, reject };

struct KEnvelope {
    std::vector<double> t_grid;
    std::vector<double> lower, upper;
    std::size_t n_sub = 0;
    int d = 0;
    std::size_t n_sim = 0;
    double alpha = 0.0;
};

// K_hat(t) = V_d(1)/(n(n-1)) * #{ordered pairs i!=j : d(i,j) <= t} for points
// already scaled into the unit ball. No edge correction: the observed ball and
// the simulated envelope share the same geometry, so the bias cancels.
std::vector<double> ripley_k_hat(const Dataset& points, const std::vector<double>& t_grid);

// Same statistic from a precomputed list of pairwise distances (unordered pairs).
std::vector<double> ripley_k_hat_from_pairs(const std::vector<double>& pair_dists,
                                            std::size_t n,
                                            int d,
                                            const std::vector<double>& t_grid);

// Pointwise empirical envelope over n_sim CSR draws in the unit ball. The total
// level alpha is split evenly across the grid (tail mass alpha/(2m) per t), so
// the any-t exit rule has family-wise level <= alpha. alpha >= 1 degenerates to
// lower = upper = pointwise median.
KEnvelope build_k_envelope(std::size_t n_sub, int d, const std::vector<double>& t_grid,
                           std::size_t n_sim, double alpha, Rng& rng);

CsrVerdict srmct_ripley(const Dataset& points, const KEnvelope& env);
CsrVerdict srmct_ripley_khat(const std::vector<double>& k_hat, const KEnvelope& env);

// mean and median NND, scaled by r
std::pair<double, double> nnd_stats(const Dataset& points, double r);
std::pair<double, double> nnd_stats_from_dists(const std::vector<double>& dists,
                                               std::size_t n, double r);

struct ClarkEvansStats {
    double mu_d = 0.0;       // expected NND of one point
    double sigma_dbar = 0.0; // sd of one NND; divide by sqrt(n) for a mean of n
    double rho = 0.0;
    int d = 0;
};

ClarkEvansStats clark_evans(double rho, int d);

// Simulated reference distributions of mean/median NND for CSR samples in the
// unit ball, per (d, size). Built lazily, cached in memory and on disk.
class NNDReference {
public:
    NNDReference(int d, std::size_t n_sim, std::uint64_t seed, std::string cache_dir);

    int dim() const { return d_; }
    std::size_t n_sim() const { return n_sim_; }

    // sorted ascending samples; size = points per simulated set (center excluded
    // from nothing here -- callers pass the non-center content count)
    const std::vector<double>& mean_sample(std::size_t size);
    const std::vector<double>& median_sample(std::size_t size);

    void ensure(std::size_t max_size); // pre-build sizes 2..max_size

private:
    struct Entry {
        std::vector<double> means, medians;
    };
    Entry& get(std::size_t size);
    void build(std::size_t size, Entry& e);
    std::string cache_path() const;
    void load_cache();
    void save_cache();

    int d_;
    std::size_t n_sim_;
    std::uint64_t seed_;
    std::string cache_dir_;
    std::map<std::size_t, Entry> table_;
    bool dirty_ = false;
    std::mutex mu_;
};

struct NndTestResult {
    CsrVerdict verdict = CsrVerdict::retain;
    bool degenerate = false; // < 2 non-center points: auto-retain
    double p_mean = 1.0, p_median = 1.0;
};

// Lower-tailed Monte Carlo test of the scaled mean/median NND of the ball
// contents (center excluded by the caller) against the reference sample for
// that size. Reject iff p(1) <= alpha/2 or p(2) <= alpha.
NndTestResult srmct_nnd(const std::vector<double>& content_dists, std::size_t n_content,
                        double r, NNDReference& ref, double alpha);

NndTestResult srmct_nnd_stats(double mean_nnd, double median_nnd, std::size_t n_content,
                              NNDReference& ref, double alpha);

// Shared lazy caches keyed by dimension so parallel detections reuse one table.
// Envelope samples are stored per (d, n_sub) as sorted K_hat values per grid t;
// quantiles for any alpha are cut from the stored sample.
class KEnvelopeTable {
public:
    KEnvelopeTable(int d, std::size_t n_sim, std::uint64_t seed, std::string cache_dir);

    KEnvelope envelope(std::size_t n_sub, double alpha);
    void ensure(std::size_t max_size);

private:
    struct Entry {
        std::vector<std::vector<double>> sorted_khat; // [t][sim], ascending
    };
    Entry& get(std::size_t n_sub);
    void build(std::size_t n_sub, Entry& e);
    std::string cache_path() const;
    void load_cache();
    void save_cache();

    int d_;
    std::size_t n_sim_;
    std::uint64_t seed_;
    std::string cache_dir_;
    std::map<std::size_t, Entry> table_;
    bool dirty_ = false;
    std::mutex mu_;
};

// cache directory: $CCD_CACHE_DIR or ".ccd_cache"
std::string default_cache_dir();

// process-wide shared tables (one per dimension)
NNDReference& shared_nnd_reference(int d, std::size_t n_sim = 1000);
KEnvelopeTable& shared_k_envelopes(int d, std::size_t n_sim = 100);

} // namespace ccd
