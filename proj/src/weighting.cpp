#include "agemap/weighting.hpp"

#include <algorithm>
#include <cmath>

namespace agemap {

double weight_of(const WeightScheme& scheme, int year) {
    if (scheme.uniform) return 1.0;
    if (scheme.y_min == scheme.y_max) return scheme.w_hi;  // single-epoch corpus

    const int y = std::clamp(year, scheme.y_min, scheme.y_max);
    const double s = scheme.exp_lo + (scheme.exp_hi - scheme.exp_lo) *
                                         (static_cast<double>(y - scheme.y_min) /
                                          static_cast<double>(scheme.y_max - scheme.y_min));
    const double v = std::pow(scheme.base, s);
    const double v_lo = std::pow(scheme.base, scheme.exp_lo);
    const double v_hi = std::pow(scheme.base, scheme.exp_hi);
    return scheme.w_lo + (scheme.w_hi - scheme.w_lo) * ((v - v_lo) / (v_hi - v_lo));
}

WeightedIncidence weigh_matrix(const IncidenceMatrix& m, const ReferenceUniverse& u,
                               const WeightScheme& scheme) {
    WeightedIncidence w;
    w.n_docs = m.n_docs;
    w.n_refs = m.n_refs;
    w.rows = m.rows;
    w.doc_ids = m.doc_ids;
    w.col_weights.resize(m.n_refs);
    for (std::size_t r = 0; r < m.n_refs; ++r) {
        const auto& year = u.refs[r].pub_year;
        w.col_weights[r] = year ? weight_of(scheme, *year)
                                : (scheme.uniform ? 1.0 : scheme.w_lo);
    }
    return w;
}

} // namespace agemap
