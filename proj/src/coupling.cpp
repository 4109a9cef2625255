#include "agemap/coupling.hpp"

#include <algorithm>
#include <cstdint>

#include "agemap/errors.hpp"

namespace agemap {

namespace {

// intersection walk over two ascending index rows
template <typename CellOp>
void for_shared(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                CellOp&& op) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            op(a[i]);
            ++i;
            ++j;
        }
    }
}

} // namespace

SimilarityMatrix classical_similarity(const IncidenceMatrix& m) {
    SimilarityMatrix s;
    s.kind = SimilarityKind::classical;
    s.doc_ids = m.doc_ids;
    s.values = SymMatrix(m.n_docs);

    const auto n = static_cast<std::int64_t>(m.n_docs);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        s.values.at(i, i) = static_cast<double>(m.rows[i].size());
        for (std::int64_t j = i + 1; j < n; ++j) {
            std::uint32_t shared = 0;
            for_shared(m.rows[i], m.rows[j], [&](std::uint32_t) { ++shared; });
            s.values.at(i, j) = static_cast<double>(shared);
        }
    }
    return s;
}

SimilarityMatrix weighted_similarity(const WeightedIncidence& w, Contribution contribution) {
    SimilarityMatrix s;
    s.kind = SimilarityKind::age_sensitive;
    s.doc_ids = w.doc_ids;
    s.values = SymMatrix(w.n_docs);
    const bool squared = contribution == Contribution::squared;

    const auto n = static_cast<std::int64_t>(w.n_docs);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        double self = 0.0;
        for (const auto col : w.rows[i]) {
            const double wt = w.col_weights[col];
            self += squared ? wt * wt : wt;
        }
        s.values.at(i, i) = self;
        for (std::int64_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for_shared(w.rows[i], w.rows[j], [&](std::uint32_t col) {
                const double wt = w.col_weights[col];
                sum += squared ? wt * wt : wt;
            });
            s.values.at(i, j) = sum;
        }
    }
    return s;
}

DistanceMatrix to_distance(const SimilarityMatrix& s) {
    const std::size_t n = s.values.size();
    double s_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s_max = std::max(s_max, s.values(i, j));
    if (s_max <= 0.0)
        throw DegenerateSimilarity("all off-diagonal similarities are zero");

    DistanceMatrix d;
    d.doc_ids = s.doc_ids;
    d.values = SymMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d.values.at(i, j) = 1.0 - s.values(i, j) / s_max;
    return d;
}

} // namespace agemap
