#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "agemap/coupling.hpp"

namespace agemap {

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// 0..n-1, the t-th merge creates node n+t.
struct Merge {
    std::int64_t left = 0;
    std::int64_t right = 0;
    double height = 0.0;
    std::uint32_t size = 0;
};

struct Dendrogram {
    std::size_t n_leaves = 0;
    std::vector<Merge> merges;          // length n_leaves - 1, heights nondecreasing
    std::vector<std::string> doc_ids;
};

/// UPGMA. Each step merges the pair of clusters with minimal mean pairwise
/// distance; ties go to the lexicographically smallest (min leaf, min leaf)
/// pair of cluster representatives.
Dendrogram average_linkage(const DistanceMatrix& d);

/// coph(i,j) = height of the lowest merge uniting leaves i and j.
DistanceMatrix cophenetic(const Dendrogram& dg);

/// Pearson correlation over the strict upper triangles. Throws ZeroVariance
/// when one side is constant, MismatchedDocs when doc lists differ.
double cophenetic_correlation(const DistanceMatrix& a, const DistanceMatrix& b);

struct CutParams {
    std::uint32_t min_cluster_size = 10;
    double cut_quantile = 0.99;   // in (0,1)
    bool deep_split = true;
};

/// Per-document positive cluster labels, 0 = unassigned. Ids are contiguous
/// 1..k ordered by descending cluster size.
struct Clustering {
    std::vector<std::uint32_t> labels;
    std::uint32_t k = 0;
    std::vector<std::string> doc_ids;
};

/// Shape-sensitive cut: a static cut at the cut_quantile of merge heights,
/// dissolution of undersized branches into their nearest surviving cluster,
/// and (deep_split) recursive re-cutting of clusters whose internal height
/// range exceeds half the cut height.
Clustering dynamic_cut(const Dendrogram& dg, const DistanceMatrix& d, const CutParams& params);

void write_dendrogram_json(std::ostream& out, const Dendrogram& dg);
void write_dendrogram_newick(std::ostream& out, const Dendrogram& dg);

} // namespace agemap
