#include "ccd/csr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ccd {

double unit_ball_volume(int d, double r) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    double logv = 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0) + d * std::log(r);
    return std::exp(logv);
}

static std::vector<double> pair_distances(const Dataset& pts) {
    std::size_t n = pts.size();
    std::vector<double> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back(euclidean(pts.point(i), pts.point(j), pts.d));
    return out;
}

std::vector<double> ripley_k_hat_from_pairs(const std::vector<double>& pair_dists,
                                            std::size_t n,
                                            int d,
                                            const std::vector<double>& t_grid) {
    if (n < 2) throw std::invalid_argument("ripley_k_hat: need >= 2 points");
    double scale = unit_ball_volume(d) / (static_cast<double>(n) * (n - 1));
    std::vector<double> k(t_grid.size(), 0.0);
    for (double dist : pair_dists)
        for (std::size_t t = 0; t < t_grid.size(); ++t)
            if (dist <= t_grid[t]) k[t] += 2.0; // ordered pairs
    for (double& v : k) v *= scale;
    return k;
}

std::vector<double> ripley_k_hat(const Dataset& points, const std::vector<double>& t_grid) {
    return ripley_k_hat_from_pairs(pair_distances(points), points.size(), points.d, t_grid);
}

static std::size_t quantile_index(double q, std::size_t n) {
    double idx = q * static_cast<double>(n - 1);
    long r = std::lround(idx);
    if (r < 0) r = 0;
    if (r >= static_cast<long>(n)) r = static_cast<long>(n) - 1;
    return static_cast<std::size_t>(r);
}

static void envelope_tails(double alpha, std::size_t m, double& qlo, double& qhi) {
    if (alpha >= 1.0) { // degenerate: collapse to the median
        qlo = qhi = 0.5;
        return;
    }
    double tail = alpha / (2.0 * static_cast<double>(m));
    qlo = tail;
    qhi = 1.0 - tail;
}

KEnvelope build_k_envelope(std::size_t n_sub, int d, const std::vector<double>& t_grid,
                           std::size_t n_sim, double alpha, Rng& rng) {
    if (n_sub < 2) throw std::invalid_argument("build_k_envelope: n_sub must be >= 2");
    if (n_sim < 20) throw std::invalid_argument("build_k_envelope: n_sim must be >= 20");
    std::vector<std::vector<double>> samples(t_grid.size(), std::vector<double>(n_sim));
    Dataset pts;
    pts.d = d;
    pts.coords.resize(n_sub * d);
    for (std::size_t s = 0; s < n_sim; ++s) {
        for (std::size_t i = 0; i < n_sub; ++i) unit_ball_point(rng, d, pts.point(i));
        auto k = ripley_k_hat(pts, t_grid);
        for (std::size_t t = 0; t < t_grid.size(); ++t) samples[t][s] = k[t];
    }
    KEnvelope env;
    env.t_grid = t_grid;
    env.n_sub = n_sub;
    env.d = d;
    env.n_sim = n_sim;
    env.alpha = alpha;
    double qlo, qhi;
    envelope_tails(alpha, t_grid.size(), qlo, qhi);
    for (auto& col : samples) {
        std::sort(col.begin(), col.end());
        env.lower.push_back(col[quantile_index(qlo, n_sim)]);
        env.upper.push_back(col[quantile_index(qhi, n_sim)]);
    }
    return env;
}

CsrVerdict srmct_ripley_khat(const std::vector<double>& k_hat, const KEnvelope& env) {
    if (k_hat.size() != env.t_grid.size())
        throw std::invalid_argument("srmct_ripley: grid size mismatch");
    for (std::size_t t = 0; t < k_hat.size(); ++t)
        if (k_hat[t] < env.lower[t] || k_hat[t] > env.upper[t]) return CsrVerdict::reject;
    return CsrVerdict::retain;
}

CsrVerdict srmct_ripley(const Dataset& points, const KEnvelope& env) {
    if (points.size() != env.n_sub)
        throw std::invalid_argument("srmct_ripley: point count does not match envelope");
    return srmct_ripley_khat(ripley_k_hat(points, env.t_grid), env);
}

std::pair<double, double> nnd_stats_from_dists(const std::vector<double>& dists,
                                               std::size_t n, double r) {
    if (n < 2) throw std::invalid_argument("nnd_stats: need >= 2 points");
    // dists: unordered pair list, index of (i,j), i<j, in lexicographic order
    std::vector<double> nnd(n, std::numeric_limits<double>::infinity());
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            double v = dists[k];
            if (v < nnd[i]) nnd[i] = v;
            if (v < nnd[j]) nnd[j] = v;
        }
    double sum = 0.0;
    for (double& v : nnd) {
        v /= r;
        sum += v;
    }
    std::sort(nnd.begin(), nnd.end());
    double median = (n % 2 == 1) ? nnd[n / 2] : 0.5 * (nnd[n / 2 - 1] + nnd[n / 2]);
    return {sum / static_cast<double>(n), median};
}

std::pair<double, double> nnd_stats(const Dataset& points, double r) {
    return nnd_stats_from_dists(pair_distances(points), points.size(), r);
}

ClarkEvansStats clark_evans(double rho, int d) {
    if (rho <= 0.0) throw std::invalid_argument("clark_evans: rho must be > 0");
    if (d < 1) throw std::invalid_argument("clark_evans: d must be >= 1");
    ClarkEvansStats s;
    s.rho = rho;
    s.d = d;
    double vd = unit_ball_volume(d);
    double scale = std::pow(rho * vd, -1.0 / d);
    double g1 = std::tgamma(1.0 + 1.0 / d);
    double g2 = std::tgamma(1.0 + 2.0 / d);
    s.mu_d = g1 * scale;
    s.sigma_dbar = std::sqrt(g2 - g1 * g1) * scale;
    return s;
}

// ---------------------------------------------------------------------------
// NND reference tables

std::string default_cache_dir() {
    if (const char* env = std::getenv("CCD_CACHE_DIR"); env && *env) return env;
    return ".ccd_cache";
}

NNDReference::NNDReference(int d, std::size_t n_sim, std::uint64_t seed, std::string cache_dir)
    : d_(d), n_sim_(n_sim), seed_(seed), cache_dir_(std::move(cache_dir)) {
    load_cache();
}

std::string NNDReference::cache_path() const {
    return cache_dir_ + "/nndref_v1_d" + std::to_string(d_) + "_m" + std::to_string(n_sim_) +
           "_s" + std::to_string(seed_) + ".bin";
}

void NNDReference::build(std::size_t size, Entry& e) {
    Rng rng(mix_seed(seed_, mix_seed(0x4e4e44ULL + d_, size)));
    e.means.resize(n_sim_);
    e.medians.resize(n_sim_);
    Dataset pts;
    pts.d = d_;
    pts.coords.resize(size * d_);
    for (std::size_t s = 0; s < n_sim_; ++s) {
        for (std::size_t i = 0; i < size; ++i) unit_ball_point(rng, d_, pts.point(i));
        auto [m, med] = nnd_stats(pts, 1.0);
        e.means[s] = m;
        e.medians[s] = med;
    }
    std::sort(e.means.begin(), e.means.end());
    std::sort(e.medians.begin(), e.medians.end());
}

NNDReference::Entry& NNDReference::get(std::size_t size) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(size);
    if (it == table_.end()) {
        it = table_.emplace(size, Entry{}).first;
        build(size, it->second);
        dirty_ = true;
    }
    return it->second;
}

const std::vector<double>& NNDReference::mean_sample(std::size_t size) { return get(size).means; }
const std::vector<double>& NNDReference::median_sample(std::size_t size) { return get(size).medians; }

void NNDReference::ensure(std::size_t max_size) {
    for (std::size_t s = 2; s <= max_size; ++s) get(s);
    std::lock_guard<std::mutex> lock(mu_);
    if (dirty_) {
        save_cache();
        dirty_ = false;
    }
}

void NNDReference::load_cache() {
    std::ifstream in(cache_path(), std::ios::binary);
    if (!in) return;
    char magic[8] = {};
    in.read(magic, 8);
    if (std::string(magic, 8) != "CCDNND1\n") return;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 8);
    for (std::uint64_t i = 0; i < count && in; ++i) {
        std::uint64_t size = 0;
        in.read(reinterpret_cast<char*>(&size), 8);
        Entry e;
        e.means.resize(n_sim_);
        e.medians.resize(n_sim_);
        in.read(reinterpret_cast<char*>(e.means.data()), n_sim_ * 8);
        in.read(reinterpret_cast<char*>(e.medians.data()), n_sim_ * 8);
        if (in) table_.emplace(size, std::move(e));
    }
}

void NNDReference::save_cache() {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir_, ec);
    std::ofstream out(cache_path(), std::ios::binary | std::ios::trunc);
    if (!out) return;
    out.write("CCDNND1\n", 8);
    std::uint64_t count = table_.size();
    out.write(reinterpret_cast<const char*>(&count), 8);
    for (const auto& [size, e] : table_) {
        std::uint64_t s = size;
        out.write(reinterpret_cast<const char*>(&s), 8);
        out.write(reinterpret_cast<const char*>(e.means.data()), n_sim_ * 8);
        out.write(reinterpret_cast<const char*>(e.medians.data()), n_sim_ * 8);
    }
}

NndTestResult srmct_nnd_stats(double mean_nnd, double median_nnd, std::size_t n_content,
                              NNDReference& ref, double alpha) {
    NndTestResult res;
    if (n_content < 2) {
        res.degenerate = true;
        return res;
    }
    const auto& means = ref.mean_sample(n_content);
    const auto& medians = ref.median_sample(n_content);
    double m = static_cast<double>(ref.n_sim());
    auto lower_p = [m](const std::vector<double>& sample, double obs) {
        auto le = std::upper_bound(sample.begin(), sample.end(), obs) - sample.begin();
        return (static_cast<double>(le) + 1.0) / (m + 1.0);
    };
    res.p_mean = lower_p(means, mean_nnd);
    res.p_median = lower_p(medians, median_nnd);
    double p1 = std::min(res.p_mean, res.p_median);
    double p2 = std::max(res.p_mean, res.p_median);
    if (p1 <= alpha / 2.0 || p2 <= alpha) res.verdict = CsrVerdict::reject;
    return res;
}

NndTestResult srmct_nnd(const std::vector<double>& content_dists, std::size_t n_content,
                        double r, NNDReference& ref, double alpha) {
    if (n_content < 2) {
        NndTestResult res;
        res.degenerate = true;
        return res;
    }
    auto [mean_nnd, median_nnd] = nnd_stats_from_dists(content_dists, n_content, r);
    return srmct_nnd_stats(mean_nnd, median_nnd, n_content, ref, alpha);
}

// ---------------------------------------------------------------------------
// K envelope tables

KEnvelopeTable::KEnvelopeTable(int d, std::size_t n_sim, std::uint64_t seed, std::string cache_dir)
    : d_(d), n_sim_(n_sim), seed_(seed), cache_dir_(std::move(cache_dir)) {
    load_cache();
}

std::string KEnvelopeTable::cache_path() const {
    return cache_dir_ + "/kenv_v1_d" + std::to_string(d_) + "_m" + std::to_string(n_sim_) +
           "_s" + std::to_string(seed_) + ".bin";
}

void KEnvelopeTable::build(std::size_t n_sub, Entry& e) {
    const auto& grid = default_t_grid();
    Rng rng(mix_seed(seed_, mix_seed(0x4b454eULL + d_, n_sub)));
    e.sorted_khat.assign(grid.size(), std::vector<double>(n_sim_));
    Dataset pts;
    pts.d = d_;
    pts.coords.resize(n_sub * d_);
    for (std::size_t s = 0; s < n_sim_; ++s) {
        for (std::size_t i = 0; i < n_sub; ++i) unit_ball_point(rng, d_, pts.point(i));
        auto k = ripley_k_hat(pts, grid);
        for (std::size_t t = 0; t < grid.size(); ++t) e.sorted_khat[t][s] = k[t];
    }
    for (auto& col : e.sorted_khat) std::sort(col.begin(), col.end());
}

KEnvelopeTable::Entry& KEnvelopeTable::get(std::size_t n_sub) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(n_sub);
    if (it == table_.end()) {
        it = table_.emplace(n_sub, Entry{}).first;
        build(n_sub, it->second);
        dirty_ = true;
    }
    return it->second;
}

KEnvelope KEnvelopeTable::envelope(std::size_t n_sub, double alpha) {
    if (n_sub < 2) throw std::invalid_argument("KEnvelopeTable: n_sub must be >= 2");
    Entry& e = get(n_sub);
    const auto& grid = default_t_grid();
    KEnvelope env;
    env.t_grid = grid;
    env.n_sub = n_sub;
    env.d = d_;
    env.n_sim = n_sim_;
    env.alpha = alpha;
    double qlo, qhi;
    envelope_tails(alpha, grid.size(), qlo, qhi);
    for (const auto& col : e.sorted_khat) {
        env.lower.push_back(col[quantile_index(qlo, n_sim_)]);
        env.upper.push_back(col[quantile_index(qhi, n_sim_)]);
    }
    return env;
}

void KEnvelopeTable::ensure(std::size_t max_size) {
    for (std::size_t s = 2; s <= max_size; ++s) get(s);
    std::lock_guard<std::mutex> lock(mu_);
    if (dirty_) {
        save_cache();
        dirty_ = false;
    }
}

void KEnvelopeTable::load_cache() {
    std::ifstream in(cache_path(), std::ios::binary);
    if (!in) return;
    char magic[8] = {};
    in.read(magic, 8);
    if (std::string(magic, 8) != "CCDKEN1\n") return;
    std::uint64_t count = 0, ngrid = 0;
    in.read(reinterpret_cast<char*>(&count), 8);
    in.read(reinterpret_cast<char*>(&ngrid), 8);
    if (ngrid != default_t_grid().size()) return;
    for (std::uint64_t i = 0; i < count && in; ++i) {
        std::uint64_t size = 0;
        in.read(reinterpret_cast<char*>(&size), 8);
        Entry e;
        e.sorted_khat.assign(ngrid, std::vector<double>(n_sim_));
        for (auto& col : e.sorted_khat)
            in.read(reinterpret_cast<char*>(col.data()), n_sim_ * 8);
        if (in) table_.emplace(size, std::move(e));
    }
}

void KEnvelopeTable::save_cache() {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir_, ec);
    std::ofstream out(cache_path(), std::ios::binary | std::ios::trunc);
    if (!out) return;
    out.write("CCDKEN1\n", 8);
    std::uint64_t count = table_.size(), ngrid = default_t_grid().size();
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(&ngrid), 8);
    for (const auto& [size, e] : table_) {
        std::uint64_t s = size;
        out.write(reinterpret_cast<const char*>(&s), 8);
        for (const auto& col : e.sorted_khat)
            out.write(reinterpret_cast<const char*>(col.data()), n_sim_ * 8);
    }
}

// ---------------------------------------------------------------------------
// process-wide shared tables

static std::mutex g_tables_mu;

NNDReference& shared_nnd_reference(int d, std::size_t n_sim) {
    static std::map<std::pair<int, std::size_t>, std::unique_ptr<NNDReference>> tables;
    std::lock_guard<std::mutex> lock(g_tables_mu);
    auto key = std::make_pair(d, n_sim);
    auto it = tables.find(key);
    if (it == tables.end())
        it = tables.emplace(key, std::make_unique<NNDReference>(d, n_sim, 0x9d5f3c1aULL,
                                                               default_cache_dir())).first;
    return *it->second;
}

KEnvelopeTable& shared_k_envelopes(int d, std::size_t n_sim) {
    static std::map<std::pair<int, std::size_t>, std::unique_ptr<KEnvelopeTable>> tables;
    std::lock_guard<std::mutex> lock(g_tables_mu);
    auto key = std::make_pair(d, n_sim);
    auto it = tables.find(key);
    if (it == tables.end())
        it = tables.emplace(key, std::make_unique<KEnvelopeTable>(d, n_sim, 0x6b9e1a37ULL,
                                                                  default_cache_dir())).first;
    return *it->second;
}

} // namespace ccd
