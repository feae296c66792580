#pragma once

// Confusion-matrix evaluation. Positive class = outlier.

#include <cstddef>
#include <vector>

namespace ccd {

struct Confusion {
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct Scores {
    double tpr = 0.0, tnr = 0.0, ba = 0.0, f_beta = 0.0;
    bool degenerate = false; // some 0/0 ratio was forced to 0
};

Confusion confusion(const std::vector<int>& truth, const std::vector<int>& flags);

Scores scores(const Confusion& c, double beta);

} // namespace ccd
