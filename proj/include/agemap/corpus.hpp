#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agemap/types.hpp"

namespace agemap {

/// Deduplicated union of all reference keys, column order fixed by sorting
/// canonicals so the matrix is independent of document order.
struct ReferenceUniverse {
    std::vector<ReferenceKey> refs;
    std::unordered_map<std::string, std::uint32_t> index;  // canonical -> column
};

/// Sparse binary documents x references matrix. Row i belongs to doc_ids[i]
/// and holds the ascending column indices of the cited references.
struct IncidenceMatrix {
    std::size_t n_docs = 0;
    std::size_t n_refs = 0;
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<std::string> doc_ids;
};

std::pair<ReferenceUniverse, IncidenceMatrix> build_incidence(const std::vector<Document>& docs);

struct PruneResult {
    IncidenceMatrix matrix;
    std::vector<std::string> removed_doc_ids;
};

/// Removes every document sharing no reference with any other document.
/// Single pass; the column universe is left untouched.
PruneResult prune_isolated(const IncidenceMatrix& m);

/// Min and max over all parseable reference years. Throws NoYearsAvailable.
std::pair<int, int> year_range(const ReferenceUniverse& u);

} // namespace agemap
