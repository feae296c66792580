#pragma once

// Geometric primitives, the catch digraph, connected components, and the
// greedy approximate minimum-dominating-set variants shared by all CCD types.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccd {

struct Dataset {
    std::vector<double> coords;           // row-major n x d
    int d = 0;
    std::optional<std::vector<int>> labels; // 0 regular, 1 outlier
    std::string seed_note;

    std::size_t size() const { return d == 0 ? 0 : coords.size() / d; }
    const double* point(std::size_t i) const { return coords.data() + i * d; }
    double* point(std::size_t i) { return coords.data() + i * d; }
    void push_point(const double* p) { coords.insert(coords.end(), p, p + d); }
    void validate() const; // throws std::invalid_argument on bad shape / non-finite
};

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
    const double* row(std::size_t i) const { return d_.data() + i * n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

struct CoveringBall {
    int center = -1;
    double radius = 0.0;
};

// Arc (i,j) present iff d(i,j) < r_i and i != j (open balls, strict).
struct CatchDigraph {
    std::vector<double> radii;
    std::vector<std::vector<int>> out; // out-neighbors, ascending ids

    std::size_t size() const { return radii.size(); }
};

struct DominatingSet {
    std::vector<int> members; // greedy insertion order
};

double euclidean(const double* a, const double* b, int d);

DistanceMatrix distance_matrix(const Dataset& data);

CatchDigraph build_digraph(const DistanceMatrix& dist, const std::vector<double>& radii);

// Greedy Alg 1: max out-degree on the sub-digraph induced by uncovered vertices,
// recomputed each round. Ties: lowest index.
DominatingSet greedy_mds_v1(const CatchDigraph& g);

// Greedy Alg 2: max out-degree in the initial digraph, never recomputed.
DominatingSet greedy_mds_v2(const CatchDigraph& g);

// Greedy Alg 3: generic scored greedy. score(v, covered) is evaluated for
// uncovered vertices each round; stop(members, covered) can end the loop early.
DominatingSet greedy_mds_scored(
    const CatchDigraph& g,
    const std::function<double(int, const std::vector<char>&)>& score,
    const std::function<bool(const std::vector<int>&, const std::vector<char>&)>& stop);

// Components of a symmetric relation given as adjacency lists; for digraphs
// symmetrize first (weak connectivity). Returns per-vertex component id (0-based,
// in order of first appearance).
std::vector<int> connected_components(std::size_t n, const std::vector<std::vector<int>>& adj);

std::vector<std::vector<int>> symmetrize(const std::vector<std::vector<int>>& out);

bool is_dominating(const CatchDigraph& g, const std::vector<int>& members);

} // namespace ccd
