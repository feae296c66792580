#pragma once

// Mutual catch graphs and the connectivity-threshold calibration of the
// KS density parameter delta.

#include "ccd/core.hpp"
#include "ccd/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ccd {

// edge {i,j} iff d(i,j) < min(r_i, r_j), i != j
struct MutualCatchGraph {
    std::vector<std::vector<int>> adj; // sorted neighbor lists, symmetric
};

MutualCatchGraph build_mcg(const CatchDigraph& g, const DistanceMatrix& dist);

// MCG restricted to a subset of points: radii indexed like ids, distances from
// the full matrix. adj uses local indices into ids.
MutualCatchGraph build_mcg_subset(const std::vector<int>& ids,
                                  const std::vector<double>& radii,
                                  const DistanceMatrix& dist);

struct CalibrationResult {
    double delta = 0.0;
    bool hit_floor = false; // grid exhausted without connectivity
};

// Estimate the largest density at which the KS-CCD mutual catch graph on the
// core points stays connected. If delta0 is too dense, walk delta0-step,
// delta0-2*step, ... downward and return the first connected grid value (the
// grid stops at its smallest positive value, flagged if connectivity was never
// reached). If delta0 already connects, refine upward to the largest connected
// value, to step precision.
CalibrationResult dmcg_calibrate(const std::vector<int>& core_ids,
                                 const DistanceMatrix& dist, int d,
                                 double delta0, double delta_step);

struct DmcgFullResult {
    bool single_component = true;
    std::vector<std::vector<int>> components; // point ids per component
    double delta_alpha = 0.0;
};

// Simulation-calibrated variant: M draws from the null sampler, each reduced to
// its maximal connected delta on the grid; delta_alpha is the lower alpha_q
// empirical quantile; the real data is then cut at delta_alpha.
DmcgFullResult dmcg_full(const Dataset& data, const DistanceMatrix& dist,
                         const std::function<Dataset(Rng&)>& null_sampler,
                         double delta0, double delta_step,
                         std::size_t m_sim, double alpha_q, std::uint64_t seed);

} // namespace ccd
