#pragma once

#include <string>
#include <vector>

#include "agemap/corpus.hpp"
#include "agemap/types.hpp"
#include "agemap/weighting.hpp"

namespace agemap {

enum class SimilarityKind { classical, age_sensitive };

/// How a shared reference of weight w contributes to the weighted
/// similarity: the literal product of the two weighted vectors (w*w), or
/// once (w).
enum class Contribution { squared, linear };

struct SimilarityMatrix {
    SymMatrix values;
    SimilarityKind kind = SimilarityKind::classical;
    std::vector<std::string> doc_ids;
};

struct DistanceMatrix {
    SymMatrix values;
    std::vector<std::string> doc_ids;
};

/// S(i,j) = |refs(i) n refs(j)|, raw and non-normalized. Diagonal is the
/// row's reference count.
SimilarityMatrix classical_similarity(const IncidenceMatrix& m);

/// S(i,j) = sum over shared references of w^2 (squared, default) or w.
SimilarityMatrix weighted_similarity(const WeightedIncidence& w,
                                     Contribution contribution = Contribution::squared);

/// d(i,j) = 1 - S(i,j)/S_max with S_max the largest off-diagonal
/// similarity; d(i,i) = 0. Throws DegenerateSimilarity when every
/// off-diagonal cell is zero.
DistanceMatrix to_distance(const SimilarityMatrix& s);

} // namespace agemap
