#pragma once

#include <cstdint>

#include "agemap/compare.hpp"
#include "agemap/coupling.hpp"
#include "agemap/hclust.hpp"

// Serial reference implementations, deliberately naive and independent of
// the production kernels. Tests check the fast paths against these; the
// benchmark times both.

namespace agemap::ref {

/// Per-pair std::set_intersection over the sparse rows, single thread.
SymMatrix classical_similarity_serial(const IncidenceMatrix& m);

SymMatrix weighted_similarity_serial(const WeightedIncidence& w,
                                     Contribution contribution = Contribution::squared);

/// O(n^3)+ agglomerator: cluster distances are recomputed from the original
/// matrix as plain means at every step. Same tie rule as the production
/// implementation.
Dendrogram average_linkage_naive(const DistanceMatrix& d);

/// Lowest common merge found by walking parent pointers per pair.
SymMatrix cophenetic_naive(const Dendrogram& dg);

struct PairCounts {
    std::uint64_t n11 = 0;
    std::uint64_t n10 = 0;
    std::uint64_t n01 = 0;
};

/// All-pairs double loop over documents assigned in both clusterings.
PairCounts pair_counts_brute(const Clustering& a, const Clustering& b);

double pair_jaccard_brute(const Clustering& a, const Clustering& b);

} // namespace agemap::ref
