#pragma once

// CCD construction (KS / RK / UN radii), reduction to dominating covering
// balls via the ball-intersection graph, silhouette-driven cluster-count
// selection, and relative-distance assignment of uncovered points.

#include "ccd/core.hpp"
#include "ccd/csr.hpp"
#include "ccd/mcg.hpp"

#include <optional>
#include <vector>

namespace ccd {

enum class CcdVariant { KS, RK, UN };
enum class ScanDirection { ascending, descending };

// KS radius: candidate set {0} union {d(i,j)}; objective
// T(r) = #{strictly inside} + 1 (the center) - delta * r^d, ties -> smallest r.
double ks_radius(std::size_t i, const DistanceMatrix& dist, double delta, int d);
double ks_radius_subset(const std::vector<int>& ids, std::size_t local_i,
                        const DistanceMatrix& dist, double delta, int d);
std::vector<double> ks_radii_subset(const std::vector<int>& ids,
                                    const DistanceMatrix& dist, double delta, int d);

// RK radius: largest candidate (sorted distances, descending scan) whose ball
// contents pass the Ripley envelope test; < 2 non-center points auto-pass.
// Returned radii are nudged one ulp up so the defining neighbor is strictly
// inside the open ball.
double rk_radius(std::size_t i, const DistanceMatrix& dist, int d,
                 KEnvelopeTable& envs, double alpha);

// UN radius, ascending: walk candidates upward, stop at the first NND-test
// rejection and return the previous candidate (r_(0) = 0). Descending: walk
// downward, return the first retained candidate.
double un_radius(std::size_t i, const DistanceMatrix& dist, int d,
                 NNDReference& ref, double alpha,
                 ScanDirection direction = ScanDirection::ascending);

struct CcdParams {
    double delta = 1.0;      // KS
    double alpha = 0.0;      // RK / UN; 0 = per-dimension default
    ScanDirection direction = ScanDirection::ascending; // UN
    std::size_t k_env_sims = 100;
    std::size_t nnd_sims = 1000;
};

// per-dimension default test levels
double default_rk_alpha(int d);
double default_un_alpha(int d);

CatchDigraph build_ccd(const Dataset& data, const DistanceMatrix& dist,
                       CcdVariant variant, const CcdParams& params);

// Two-phase reduction: greedy (initial out-degree) dominating set of the
// digraph, then a scored greedy dominating set of the ball-intersection graph
// (score = newly covered data points). Balls come back in insertion order.
std::vector<CoveringBall> dominating_balls(const CatchDigraph& g, const DistanceMatrix& dist);

// mean silhouette of a partition given as blocks of point ids; singletons
// score 0; requires >= 2 blocks
double silhouette(const DistanceMatrix& dist, const std::vector<std::vector<int>>& blocks);

// A candidate cluster before selection: its covering balls and the ids they
// cover (centers included).
struct ClusterCandidate {
    std::vector<CoveringBall> balls;
    std::vector<int> covered;
    int seed_center = -1;
    double seed_radius = 0.0;
};

struct Cluster {
    std::vector<CoveringBall> core_balls;
    std::vector<int> covered_ids; // pre-assignment membership (the core set)
    std::vector<int> member_ids;  // total membership after assignment
    double delta_j = 0.0;
    int seed_center = -1;
    double seed_radius = 0.0;
};

struct ClusterModel {
    std::vector<Cluster> clusters;
    std::vector<int> rejected_ids; // exclusive members of balls dropped by s_min
    bool zero_radius_fallback = false;
    bool shared_component = false; // two dominating balls shared one MCG component
};

ClusterCandidate ball_candidate(const CoveringBall& b, const CatchDigraph& g);

// SU-style extension: candidate per dominating ball, grown to the union of the
// covering balls of the center and its direct mutual-catch neighbors.
std::vector<ClusterCandidate> extend_coverage(const CatchDigraph& g,
                                              const MutualCatchGraph& mcg,
                                              const std::vector<CoveringBall>& balls,
                                              const DistanceMatrix& dist);

// Rank candidates by covered count (descending), grow the model from two while
// the mean silhouette improves, stop early when the next candidate is smaller
// than s_min; a two-cluster model needs positive silhouette to beat one
// cluster. s_min = 0 disables the size rule.
ClusterModel select_clusters(std::vector<ClusterCandidate> candidates,
                             const DistanceMatrix& dist, std::size_t s_min);

// Give every unassigned point a cluster via the relative distance
// d(x, center)/radius, minimized over each cluster's core balls.
void assign_stragglers(ClusterModel& model, const DistanceMatrix& dist);

} // namespace ccd
