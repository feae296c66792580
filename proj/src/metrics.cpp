#include "ccd/metrics.hpp"

#include <stdexcept>

namespace ccd {

Confusion confusion(const std::vector<int>& truth, const std::vector<int>& flags) {
    if (truth.size() != flags.size())
        throw std::invalid_argument("confusion: length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        bool t = truth[i] != 0, f = flags[i] != 0;
        if (t && f) ++c.tp;
        else if (t && !f) ++c.fn;
        else if (!t && f) ++c.fp;
        else ++c.tn;
    }
    return c;
}

Scores scores(const Confusion& c, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("scores: beta must be > 0");
    Scores s;
    auto ratio = [&s](double num, double den) {
        if (den == 0.0) { s.degenerate = true; return 0.0; }
        return num / den;
    };
    s.tpr = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    s.tnr = ratio(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fp));
    s.ba = 0.5 * (s.tpr + s.tnr);
    double prec = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    double rec = s.tpr;
    double b2 = beta * beta;
    double den = b2 * prec + rec;
    s.f_beta = den == 0.0 ? (s.degenerate = true, 0.0) : (1.0 + b2) * prec * rec / den;
    return s;
}

} // namespace ccd
