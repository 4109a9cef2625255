#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agemap/corpus.hpp"

namespace agemap {

/// Age-weight scheme: publication years are rescaled into [exp_lo, exp_hi],
/// exponentiated with the given base, and the analytic range of that value
/// is rescaled into [w_lo, w_hi]. The uniform toggle turns every weight
/// into 1, collapsing the age-sensitive branch onto the classical one.
struct WeightScheme {
    double base = 30.0;
    double exp_lo = 1.0;
    double exp_hi = 10.0;
    double w_lo = 1.0;
    double w_hi = 100.0;
    int y_min = 0;
    int y_max = 0;
    bool uniform = false;
};

/// Weight for a publication year. Years outside [y_min, y_max] are clamped;
/// a degenerate range (y_min == y_max) maps every year to w_hi.
double weight_of(const WeightScheme& scheme, int year);

/// Incidence matrix with per-column age weights instead of 1-cells.
/// Sparsity matches the binary matrix; a stored cell in column r weighs
/// col_weights[r].
struct WeightedIncidence {
    std::size_t n_docs = 0;
    std::size_t n_refs = 0;
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<std::string> doc_ids;
    std::vector<double> col_weights;
};

/// References with no parseable year get the floor weight w_lo.
WeightedIncidence weigh_matrix(const IncidenceMatrix& m, const ReferenceUniverse& u,
                               const WeightScheme& scheme);

} // namespace agemap
