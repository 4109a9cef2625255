#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "agemap/hclust.hpp"

namespace agemap {

/// Cross-table of two clusterings. Row/column label values are listed in
/// labels_a/labels_b (ascending; label 0 appears as a reserved row/column
/// when unassigned documents exist). Fractions are relative to total.
struct ConfusionMatrix {
    std::vector<std::uint32_t> labels_a;
    std::vector<std::uint32_t> labels_b;
    std::vector<std::vector<std::uint64_t>> counts;
    std::vector<std::uint64_t> row_sums;
    std::vector<std::uint64_t> col_sums;
    std::vector<double> row_fracs;
    std::vector<double> col_fracs;
    std::uint64_t total = 0;
};

/// Pair-counting Jaccard over documents assigned in both clusterings:
/// J = n11 / (n11 + n10 + n01), 0 when no pair is co-clustered anywhere.
double pair_jaccard(const Clustering& a, const Clustering& b);

ConfusionMatrix confusion(const Clustering& a, const Clustering& b);

struct ComparisonReport {
    double jaccard = 0.0;
    double cophenetic_r = 0.0;
    ConfusionMatrix confusion;
    std::uint32_t k_a = 0;
    std::uint32_t k_b = 0;
};

ComparisonReport compare_full(const Clustering& cluster_a, const Clustering& cluster_b,
                              const Dendrogram& tree_a, const Dendrogram& tree_b);

/// Aligned-text rendering with Sum and percentage marginals.
void write_confusion_table(std::ostream& out, const ConfusionMatrix& c,
                           const char* row_name = "A", const char* col_name = "B");

} // namespace agemap
