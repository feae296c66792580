#include "ccd/mcg.hpp"
#include "ccd/ccd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccd {

MutualCatchGraph build_mcg(const CatchDigraph& g, const DistanceMatrix& dist) {
    std::size_t n = g.size();
    MutualCatchGraph m;
    m.adj.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist(i, j) < std::min(g.radii[i], g.radii[j])) {
                m.adj[i].push_back(static_cast<int>(j));
                m.adj[j].push_back(static_cast<int>(i));
            }
    return m;
}

MutualCatchGraph build_mcg_subset(const std::vector<int>& ids,
                                  const std::vector<double>& radii,
                                  const DistanceMatrix& dist) {
    std::size_t n = ids.size();
    if (radii.size() != n) throw std::invalid_argument("build_mcg_subset: radius count mismatch");
    MutualCatchGraph m;
    m.adj.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist(ids[i], ids[j]) < std::min(radii[i], radii[j])) {
                m.adj[i].push_back(static_cast<int>(j));
                m.adj[j].push_back(static_cast<int>(i));
            }
    return m;
}

static bool mcg_connected(const std::vector<int>& ids, const DistanceMatrix& dist,
                          int d, double delta) {
    auto radii = ks_radii_subset(ids, dist, delta, d);
    auto m = build_mcg_subset(ids, radii, dist);
    auto comp = connected_components(ids.size(), m.adj);
    for (int c : comp)
        if (c != 0) return false;
    return true;
}

CalibrationResult dmcg_calibrate(const std::vector<int>& core_ids,
                                 const DistanceMatrix& dist, int d,
                                 double delta0, double delta_step) {
    if (core_ids.empty()) throw std::invalid_argument("dmcg_calibrate: empty core");
    if (delta0 <= 0.0 || delta_step <= 0.0)
        throw std::invalid_argument("dmcg_calibrate: delta0 and delta_step must be > 0");
    if (core_ids.size() == 1) return {delta0, false};
    if (!mcg_connected(core_ids, dist, d, delta0)) {
        double last = delta0;
        for (double delta = delta0 - delta_step; delta > 0.0; delta -= delta_step) {
            last = delta;
            if (mcg_connected(core_ids, dist, d, delta)) return {delta, false};
        }
        return {last, true}; // grid exhausted; connectivity only past the floor
    }
    // delta0 understates the density: refine upward to the largest connected
    // value (connectivity is monotone in -delta), to step precision
    double lo = delta0, hi = delta0;
    bool unbounded = true;
    for (int i = 0; i < 60; ++i) {
        hi *= 2.0;
        if (!mcg_connected(core_ids, dist, d, hi)) {
            unbounded = false;
            break;
        }
        lo = hi;
    }
    if (unbounded) return {lo, false}; // coincident points never disconnect
    while (hi - lo > delta_step) {
        double mid = 0.5 * (lo + hi);
        if (mcg_connected(core_ids, dist, d, mid)) lo = mid;
        else hi = mid;
    }
    return {lo, false};
}

DmcgFullResult dmcg_full(const Dataset& data, const DistanceMatrix& dist,
                         const std::function<Dataset(Rng&)>& null_sampler,
                         double delta0, double delta_step,
                         std::size_t m_sim, double alpha_q, std::uint64_t seed) {
    if (m_sim < 1) throw std::invalid_argument("dmcg_full: m_sim must be >= 1");
    std::vector<double> deltas;
    deltas.reserve(m_sim);
    for (std::size_t s = 0; s < m_sim; ++s) {
        Rng rng(mix_seed(seed, s));
        Dataset sim = null_sampler(rng);
        if (sim.d != data.d) throw std::invalid_argument("dmcg_full: sampler dimension mismatch");
        DistanceMatrix sd = distance_matrix(sim);
        std::vector<int> ids(sim.size());
        std::iota(ids.begin(), ids.end(), 0);
        // maximal connected delta on the grid (connectivity is monotone in -delta)
        deltas.push_back(dmcg_calibrate(ids, sd, sim.d, delta0, delta_step).delta);
    }
    std::sort(deltas.begin(), deltas.end());
    std::size_t idx = static_cast<std::size_t>(
        std::max<long>(0, static_cast<long>(std::ceil(alpha_q * static_cast<double>(m_sim))) - 1));
    if (idx >= m_sim) idx = m_sim - 1;
    DmcgFullResult res;
    res.delta_alpha = deltas[idx];

    std::vector<int> ids(data.size());
    std::iota(ids.begin(), ids.end(), 0);
    auto radii = ks_radii_subset(ids, dist, res.delta_alpha, data.d);
    auto m = build_mcg_subset(ids, radii, dist);
    auto comp = connected_components(ids.size(), m.adj);
    int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    res.components.assign(ncomp, {});
    for (std::size_t i = 0; i < comp.size(); ++i)
        res.components[comp[i]].push_back(static_cast<int>(i));
    res.single_component = ncomp == 1;
    return res;
}

} // namespace ccd
