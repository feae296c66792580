#include "ccd/core.hpp"

#include <algorithm>
#include <cmath>

namespace ccd {

void Dataset::validate() const {
    if (d < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
    if (coords.empty() || coords.size() % static_cast<std::size_t>(d) != 0)
        throw std::invalid_argument("Dataset: coordinate count not a multiple of d");
    for (double v : coords)
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite coordinate");
    if (labels && labels->size() != size())
        throw std::invalid_argument("Dataset: label count mismatch");
}

double euclidean(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        double t = a[k] - b[k];
        s += t * t;
    }
    return std::sqrt(s);
}

DistanceMatrix distance_matrix(const Dataset& data) {
    data.validate();
    std::size_t n = data.size();
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = euclidean(data.point(i), data.point(j), data.d);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

CatchDigraph build_digraph(const DistanceMatrix& dist, const std::vector<double>& radii) {
    std::size_t n = dist.size();
    if (radii.size() != n) throw std::invalid_argument("build_digraph: radius count != n");
    CatchDigraph g;
    g.radii = radii;
    g.out.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = dist.row(i);
        double r = radii[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && row[j] < r) g.out[i].push_back(static_cast<int>(j));
    }
    return g;
}

DominatingSet greedy_mds_v1(const CatchDigraph& g) {
    std::size_t n = g.size();
    if (n == 0) throw std::invalid_argument("greedy_mds_v1: empty digraph");
    std::vector<char> covered(n, 0);
    DominatingSet s;
    std::size_t left = n;
    while (left > 0) {
        // out-degree within the sub-digraph induced by uncovered vertices
        int best = -1;
        long best_deg = -1;
        for (std::size_t v = 0; v < n; ++v) {
            if (covered[v]) continue;
            long deg = 0;
            for (int w : g.out[v])
                if (!covered[w]) ++deg;
            if (deg > best_deg) {
                best_deg = deg;
                best = static_cast<int>(v);
            }
        }
        s.members.push_back(best);
        if (!covered[best]) { covered[best] = 1; --left; }
        for (int w : g.out[best])
            if (!covered[w]) { covered[w] = 1; --left; }
    }
    return s;
}

DominatingSet greedy_mds_v2(const CatchDigraph& g) {
    std::size_t n = g.size();
    if (n == 0) throw std::invalid_argument("greedy_mds_v2: empty digraph");
    // order by initial out-degree, ties by index
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return g.out[a].size() > g.out[b].size();
    });
    std::vector<char> covered(n, 0);
    DominatingSet s;
    std::size_t left = n;
    for (int v : order) {
        if (left == 0) break;
        if (covered[v]) continue; // only uncovered vertices are eligible picks
        s.members.push_back(v);
        covered[v] = 1; --left;
        for (int w : g.out[v])
            if (!covered[w]) { covered[w] = 1; --left; }
    }
    return s;
}

DominatingSet greedy_mds_scored(
    const CatchDigraph& g,
    const std::function<double(int, const std::vector<char>&)>& score,
    const std::function<bool(const std::vector<int>&, const std::vector<char>&)>& stop) {
    std::size_t n = g.size();
    if (n == 0) throw std::invalid_argument("greedy_mds_scored: empty digraph");
    std::vector<char> covered(n, 0);
    DominatingSet s;
    std::size_t left = n;
    while (left > 0) {
        if (stop && stop(s.members, covered)) break;
        int best = -1;
        double best_sc = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (covered[v]) continue;
            double sc = score(static_cast<int>(v), covered);
            if (best < 0 || sc > best_sc) {
                best_sc = sc;
                best = static_cast<int>(v);
            }
        }
        s.members.push_back(best);
        if (!covered[best]) { covered[best] = 1; --left; }
        for (int w : g.out[best])
            if (!covered[w]) { covered[w] = 1; --left; }
    }
    return s;
}

std::vector<std::vector<int>> symmetrize(const std::vector<std::vector<int>>& out) {
    std::size_t n = out.size();
    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int j : out[i]) {
            adj[i].push_back(j);
            adj[j].push_back(static_cast<int>(i));
        }
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
}

std::vector<int> connected_components(std::size_t n, const std::vector<std::vector<int>>& adj) {
    std::vector<int> comp(n, -1);
    int next = 0;
    std::vector<int> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(static_cast<int>(s));
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return comp;
}

bool is_dominating(const CatchDigraph& g, const std::vector<int>& members) {
    std::vector<char> covered(g.size(), 0);
    for (int v : members) {
        covered[v] = 1;
        for (int w : g.out[v]) covered[w] = 1;
    }
    for (char c : covered)
        if (!c) return false;
    return true;
}

} // namespace ccd
