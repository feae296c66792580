#include "ccd/ccd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccd {

static double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

static double bump(double r) {
    return r <= 0.0 ? 0.0 : std::nextafter(r, std::numeric_limits<double>::infinity());
}

// sorted (distance, id) pairs to every other subset member
static std::vector<std::pair<double, int>> sorted_neighbors(const std::vector<int>& ids,
                                                            std::size_t local_i,
                                                            const DistanceMatrix& dist) {
    std::vector<std::pair<double, int>> nb;
    nb.reserve(ids.size() - 1);
    int self = ids[local_i];
    for (std::size_t j = 0; j < ids.size(); ++j)
        if (j != local_i) nb.emplace_back(dist(self, ids[j]), ids[j]);
    std::sort(nb.begin(), nb.end());
    return nb;
}

double ks_radius_subset(const std::vector<int>& ids, std::size_t local_i,
                        const DistanceMatrix& dist, double delta, int d) {
    if (delta <= 0.0) throw std::invalid_argument("ks_radius: delta must be > 0");
    auto nb = sorted_neighbors(ids, local_i, dist);
    double best_r = 0.0, best_t = 1.0; // r = 0 catches only the center: T = 1
    std::size_t strictly_inside = 0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
        if (k > 0 && nb[k].first > nb[k - 1].first) strictly_inside = k;
        double r = nb[k].first;
        double t = static_cast<double>(strictly_inside) + 1.0 - delta * ipow(r, d);
        if (t > best_t) { // strict: ties keep the smallest maximizing radius
            best_t = t;
            best_r = r;
        }
    }
    return best_r;
}

double ks_radius(std::size_t i, const DistanceMatrix& dist, double delta, int d) {
    std::vector<int> ids(dist.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ks_radius_subset(ids, i, dist, delta, d);
}

std::vector<double> ks_radii_subset(const std::vector<int>& ids,
                                    const DistanceMatrix& dist, double delta, int d) {
    std::vector<double> radii(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        radii[i] = ks_radius_subset(ids, i, dist, delta, d);
    return radii;
}

double default_rk_alpha(int d) { return d < 10 ? 0.01 : 0.001; }

double default_un_alpha(int d) {
    static const int dims[7] = {2, 3, 5, 10, 20, 50, 100};
    static const double alphas[7] = {0.15, 0.10, 0.05, 0.01, 0.001, 0.001, 0.001};
    int best = 0;
    for (int i = 1; i < 7; ++i)
        if (std::abs(dims[i] - d) < std::abs(dims[best] - d)) best = i;
    return alphas[best];
}

double rk_radius(std::size_t i, const DistanceMatrix& dist, int d,
                 KEnvelopeTable& envs, double alpha) {
    std::size_t n = dist.size();
    if (n < 2) return 0.0;
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    auto nb = sorted_neighbors(ids, i, dist);
    const auto& grid = default_t_grid();
    std::size_t m_grid = grid.size();
    std::vector<double> thresh(m_grid), counts(m_grid);

    for (std::size_t k = nb.size(); k >= 1; --k) {
        double r = nb[k - 1].first;
        if (k < 2) return bump(r); // nothing to test against CSR
        std::size_t m = k + 1;     // contents: center + k nearest
        for (std::size_t t = 0; t < m_grid; ++t) {
            thresh[t] = grid[t] * r;
            counts[t] = 0.0;
        }
        auto tally = [&](double v) {
            for (std::size_t t = 0; t < m_grid; ++t)
                if (v <= thresh[t]) { counts[t] += 1.0; break; }
        };
        for (std::size_t a = 0; a < k; ++a) {
            tally(nb[a].first); // center-neighbor pair
            const double* row = dist.row(nb[a].second);
            for (std::size_t b = a + 1; b < k; ++b) tally(row[nb[b].second]);
        }
        // bucket counts -> cumulative pair counts -> K_hat
        double scale = unit_ball_volume(d) * 2.0 / (static_cast<double>(m) * (m - 1));
        double cum = 0.0;
        bool inside = true;
        KEnvelope env = envs.envelope(m, alpha);
        for (std::size_t t = 0; t < m_grid; ++t) {
            cum += counts[t];
            double khat = cum * scale;
            if (khat < env.lower[t] || khat > env.upper[t]) { inside = false; break; }
        }
        if (inside) return bump(r);
    }
    return 0.0;
}

double un_radius(std::size_t i, const DistanceMatrix& dist, int d,
                 NNDReference& ref, double alpha, ScanDirection direction) {
    std::size_t n = dist.size();
    if (n < 2) return 0.0;
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    auto nb = sorted_neighbors(ids, i, dist);

    if (direction == ScanDirection::ascending) {
        // incrementally maintained nearest-neighbor distances of the contents
        std::vector<double> nnd;
        nnd.reserve(nb.size());
        double prev = 0.0;
        for (std::size_t j = 1; j <= nb.size(); ++j) {
            double r = nb[j - 1].first;
            int pid = nb[j - 1].second;
            double own = std::numeric_limits<double>::infinity();
            const double* row = dist.row(pid);
            for (std::size_t a = 0; a + 1 < j; ++a) {
                double v = row[nb[a].second];
                if (v < own) own = v;
                if (v < nnd[a]) nnd[a] = v;
            }
            nnd.push_back(own);
            if (j >= 2 && r > 0.0) {
                double sum = 0.0;
                std::vector<double> s(nnd);
                for (double& v : s) { v /= r; }
                for (double v : s) sum += v;
                std::sort(s.begin(), s.end());
                double med = (j % 2 == 1) ? s[j / 2] : 0.5 * (s[j / 2 - 1] + s[j / 2]);
                auto res = srmct_nnd_stats(sum / static_cast<double>(j), med, j, ref, alpha);
                if (res.verdict == CsrVerdict::reject) return bump(prev);
            }
            prev = r;
        }
        return bump(prev);
    }

    // descending: first candidate whose contents are retained
    for (std::size_t j = nb.size(); j >= 1; --j) {
        double r = nb[j - 1].first;
        if (j < 2 || r <= 0.0) return bump(r); // auto-pass
        std::vector<double> dists;
        dists.reserve(j * (j - 1) / 2);
        for (std::size_t a = 0; a < j; ++a) {
            const double* row = dist.row(nb[a].second);
            for (std::size_t b = a + 1; b < j; ++b) dists.push_back(row[nb[b].second]);
        }
        auto res = srmct_nnd(dists, j, r, ref, alpha);
        if (res.verdict == CsrVerdict::retain) return bump(r);
    }
    return 0.0;
}

CatchDigraph build_ccd(const Dataset& data, const DistanceMatrix& dist,
                       CcdVariant variant, const CcdParams& params) {
    std::size_t n = dist.size();
    std::vector<double> radii(n);
    if (variant == CcdVariant::KS) {
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        radii = ks_radii_subset(ids, dist, params.delta, data.d);
    } else if (variant == CcdVariant::RK) {
        double alpha = params.alpha > 0.0 ? params.alpha : default_rk_alpha(data.d);
        auto& envs = shared_k_envelopes(data.d, params.k_env_sims);
        envs.ensure(n);
        for (std::size_t i = 0; i < n; ++i)
            radii[i] = rk_radius(i, dist, data.d, envs, alpha);
    } else {
        double alpha = params.alpha > 0.0 ? params.alpha : default_un_alpha(data.d);
        auto& ref = shared_nnd_reference(data.d, params.nnd_sims);
        if (n >= 3) ref.ensure(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            radii[i] = un_radius(i, dist, data.d, ref, alpha, params.direction);
    }
    return build_digraph(dist, radii);
}

std::vector<CoveringBall> dominating_balls(const CatchDigraph& g, const DistanceMatrix& dist) {
    std::size_t n = g.size();
    if (n == 0) return {};
    DominatingSet s1 = greedy_mds_v2(g);
    std::size_t m = s1.members.size();

    // data points strictly inside each chosen ball (center counts as covered)
    std::vector<std::vector<char>> inside(m, std::vector<char>(n, 0));
    for (std::size_t u = 0; u < m; ++u) {
        int c = s1.members[u];
        inside[u][c] = 1;
        for (int w : g.out[c]) inside[u][w] = 1;
    }

    // ball-intersection graph: edge iff the balls share a covered point
    std::vector<std::vector<int>> gmd(m);
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = u + 1; v < m; ++v) {
            bool hit = false;
            for (std::size_t p = 0; p < n && !hit; ++p)
                if (inside[u][p] && inside[v][p]) hit = true;
            if (hit) {
                gmd[u].push_back(static_cast<int>(v));
                gmd[v].push_back(static_cast<int>(u));
            }
        }

    // scored greedy: pick the undominated ball covering the most new data points
    std::vector<char> dominated(m, 0), data_covered(n, 0);
    std::vector<CoveringBall> out;
    std::size_t left = m;
    while (left > 0) {
        int best = -1;
        long best_sc = -1;
        for (std::size_t v = 0; v < m; ++v) {
            if (dominated[v]) continue;
            long sc = 0;
            for (std::size_t p = 0; p < n; ++p)
                if (inside[v][p] && !data_covered[p]) ++sc;
            if (sc > best_sc) {
                best_sc = sc;
                best = static_cast<int>(v);
            }
        }
        dominated[best] = 1;
        --left;
        for (int w : gmd[best])
            if (!dominated[w]) { dominated[w] = 1; --left; }
        for (std::size_t p = 0; p < n; ++p)
            if (inside[best][p]) data_covered[p] = 1;
        out.push_back({s1.members[best], g.radii[s1.members[best]]});
    }
    return out;
}

double silhouette(const DistanceMatrix& dist, const std::vector<std::vector<int>>& blocks) {
    std::vector<const std::vector<int>*> nonempty;
    for (const auto& b : blocks)
        if (!b.empty()) nonempty.push_back(&b);
    if (nonempty.size() < 2) throw std::invalid_argument("silhouette: need >= 2 blocks");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t bi = 0; bi < nonempty.size(); ++bi) {
        const auto& blk = *nonempty[bi];
        for (int x : blk) {
            ++count;
            if (blk.size() == 1) continue; // singleton scores 0
            double a = 0.0;
            const double* row = dist.row(x);
            for (int y : blk)
                if (y != x) a += row[y];
            a /= static_cast<double>(blk.size() - 1);
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t bj = 0; bj < nonempty.size(); ++bj) {
                if (bj == bi) continue;
                double s = 0.0;
                for (int y : *nonempty[bj]) s += row[y];
                s /= static_cast<double>(nonempty[bj]->size());
                if (s < b) b = s;
            }
            double m = std::max(a, b);
            if (m > 0.0) total += (b - a) / m;
        }
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

ClusterCandidate ball_candidate(const CoveringBall& b, const CatchDigraph& g) {
    ClusterCandidate c;
    c.balls = {b};
    c.seed_center = b.center;
    c.seed_radius = b.radius;
    c.covered.push_back(b.center);
    for (int w : g.out[b.center]) c.covered.push_back(w);
    std::sort(c.covered.begin(), c.covered.end());
    c.covered.erase(std::unique(c.covered.begin(), c.covered.end()), c.covered.end());
    return c;
}

std::vector<ClusterCandidate> extend_coverage(const CatchDigraph& g,
                                              const MutualCatchGraph& mcg,
                                              const std::vector<CoveringBall>& balls,
                                              const DistanceMatrix& dist) {
    std::size_t n = g.size();
    std::vector<ClusterCandidate> out;
    for (const auto& b : balls) {
        ClusterCandidate c;
        c.seed_center = b.center;
        c.seed_radius = b.radius;
        // the cluster grows by the balls of the center's direct mutual-catch
        // neighbors, not the whole connected component: a chain of marginal
        // mutual links must not pull in far-away groups
        std::vector<int> members{b.center};
        for (int w : mcg.adj[b.center]) members.push_back(w);
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        std::vector<char> covered(n, 0);
        for (int p : members) {
            c.balls.push_back({p, g.radii[p]});
            covered[p] = 1; // contributing centers belong to the cluster
            for (int w : g.out[p]) covered[w] = 1;
        }
        for (std::size_t p = 0; p < n; ++p)
            if (covered[p]) c.covered.push_back(static_cast<int>(p));
        out.push_back(std::move(c));
    }
    return out;
}

// append every point not in any block to the block minimizing the relative
// distance d(x, center)/radius over that candidate's balls
static bool complete_partition(std::vector<std::vector<int>>& blocks,
                               const std::vector<const std::vector<CoveringBall>*>& balls,
                               const std::vector<int>& seed_centers,
                               const DistanceMatrix& dist) {
    std::size_t n = dist.size();
    std::vector<char> taken(n, 0);
    for (const auto& b : blocks)
        for (int p : b) taken[p] = 1;
    bool fallback = false;
    for (std::size_t p = 0; p < n; ++p) {
        if (taken[p]) continue;
        const double* row = dist.row(p);
        double best_rho = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < blocks.size(); ++c) {
            for (const auto& b : *balls[c]) {
                double dd = row[b.center];
                double rho;
                if (b.radius > 0.0) rho = dd / b.radius;
                else rho = dd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
                if (rho < best_rho) {
                    best_rho = rho;
                    best_c = c;
                }
            }
        }
        if (!std::isfinite(best_rho)) { // every ball degenerate: raw distance
            fallback = true;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < blocks.size(); ++c) {
                double dd = row[seed_centers[c]];
                if (dd < best_d) {
                    best_d = dd;
                    best_c = c;
                }
            }
        }
        blocks[best_c].push_back(static_cast<int>(p));
    }
    return fallback;
}

ClusterModel select_clusters(std::vector<ClusterCandidate> candidates,
                             const DistanceMatrix& dist, std::size_t s_min) {
    if (candidates.empty()) throw std::invalid_argument("select_clusters: no candidates");
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const ClusterCandidate& a, const ClusterCandidate& b) {
                         return a.covered.size() > b.covered.size();
                     });
    std::size_t n = dist.size();

    ClusterModel model;
    for (std::size_t i = 0; i + 1 < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j)
            if (candidates[i].seed_center != candidates[j].seed_center &&
                candidates[i].covered == candidates[j].covered)
                model.shared_component = true;

    // core partition of the covered points: first chosen candidate wins
    auto blocks_for = [&](const std::vector<std::size_t>& chosen) {
        std::vector<std::vector<int>> blocks(chosen.size());
        std::vector<char> taken(n, 0);
        for (std::size_t c = 0; c < chosen.size(); ++c)
            for (int p : candidates[chosen[c]].covered)
                if (!taken[p]) {
                    taken[p] = 1;
                    blocks[c].push_back(p);
                }
        return blocks;
    };
    // the silhouette is judged on the whole data set, so each trial partition
    // is completed by relative-distance assignment first
    auto total_silhouette = [&](const std::vector<std::size_t>& chosen) {
        auto blocks = blocks_for(chosen);
        std::vector<const std::vector<CoveringBall>*> balls;
        std::vector<int> seeds;
        for (std::size_t c : chosen) {
            balls.push_back(&candidates[c].balls);
            seeds.push_back(candidates[c].seed_center);
        }
        complete_partition(blocks, balls, seeds, dist);
        return silhouette(dist, blocks);
    };

    std::vector<std::size_t> chosen{0};
    double sil_cur = 0.0;
    bool have_sil = false;
    for (std::size_t next = 1; next < candidates.size(); ++next) {
        auto trial = chosen;
        trial.push_back(next);
        // the candidate's size is what it actually contributes beyond the
        // clusters already accepted
        std::size_t exclusive = blocks_for(trial).back().size();
        if (exclusive == 0) continue; // redundant (e.g. shared MCG component)
        if (s_min > 0 && exclusive < s_min) break;
        double sil = total_silhouette(trial);
        if (!have_sil) {
            if (sil <= 0.0) break; // two clusters must beat the one-cluster model
            sil_cur = sil;
            have_sil = true;
            chosen = std::move(trial);
        } else if (sil > sil_cur) {
            sil_cur = sil;
            chosen = std::move(trial);
        } else {
            break;
        }
    }

    auto blocks = blocks_for(chosen);
    std::vector<char> in_accepted(n, 0);
    for (const auto& blk : blocks)
        for (int p : blk) in_accepted[p] = 1;

    for (std::size_t c = 0; c < chosen.size(); ++c) {
        Cluster cl;
        cl.core_balls = candidates[chosen[c]].balls;
        cl.covered_ids = blocks[c];
        cl.seed_center = candidates[chosen[c]].seed_center;
        cl.seed_radius = candidates[chosen[c]].seed_radius;
        model.clusters.push_back(std::move(cl));
    }

    // unchosen candidates below the size rule: their exclusive points are outliers
    if (s_min > 0) {
        std::vector<char> is_chosen(candidates.size(), 0);
        for (std::size_t c : chosen) is_chosen[c] = 1;
        std::vector<char> rejected(n, 0);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (is_chosen[c]) continue;
            std::vector<int> exclusive;
            for (int p : candidates[c].covered)
                if (!in_accepted[p]) exclusive.push_back(p);
            if (exclusive.empty() || exclusive.size() >= s_min) continue;
            for (int p : exclusive) rejected[p] = 1;
        }
        for (std::size_t p = 0; p < n; ++p)
            if (rejected[p]) model.rejected_ids.push_back(static_cast<int>(p));
    }
    return model;
}

void assign_stragglers(ClusterModel& model, const DistanceMatrix& dist) {
    if (model.clusters.empty()) throw std::invalid_argument("assign_stragglers: no clusters");
    std::vector<std::vector<int>> blocks;
    std::vector<const std::vector<CoveringBall>*> balls;
    std::vector<int> seeds;
    for (const auto& cl : model.clusters) {
        blocks.push_back(cl.covered_ids);
        balls.push_back(&cl.core_balls);
        seeds.push_back(cl.seed_center);
    }
    if (complete_partition(blocks, balls, seeds, dist)) model.zero_radius_fallback = true;
    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        model.clusters[c].member_ids = std::move(blocks[c]);
        std::sort(model.clusters[c].member_ids.begin(), model.clusters[c].member_ids.end());
    }
}

} // namespace ccd
