#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agemap/corpus.hpp"
#include "agemap/weighting.hpp"

namespace agemap {

/// A reference ranked within one cluster by its cumulative weight
/// (age weight x number of citing documents inside the cluster).
struct CoreEntry {
    ReferenceKey ref;
    double cum_weight = 0.0;
    std::uint32_t occurrence_count = 0;
    std::uint32_t rank = 0;  // 1-based, descending cum_weight
};

/// All references cited from inside the cluster, sorted by descending
/// cumulative weight, ties broken by canonical string.
std::vector<CoreEntry> cumulative_weights(const std::vector<std::uint32_t>& cluster_docs,
                                          const IncidenceMatrix& m, const ReferenceUniverse& u,
                                          const WeightScheme& scheme);

struct KneeResult {
    std::uint32_t knee_rank = 0;  // 1-based
    double threshold = 0.0;       // curve value at the knee
};

/// Max perpendicular distance to the head-to-tail chord over a descending
/// curve; near-linear curves fall back to the last rank. Throws TooShort
/// for fewer than 3 points.
KneeResult detect_knee(const std::vector<double>& curve);

struct HistogramBin {
    std::optional<int> bin_start;  // nullopt = references without a year
    std::uint64_t count = 0;
};

struct CoreReport {
    std::uint32_t cluster_id = 0;
    std::vector<CoreEntry> entries;
    std::uint32_t knee_rank = 0;
    double threshold = 0.0;
    std::size_t core_size = 0;                 // core = entries[0..core_size)
    std::vector<HistogramBin> age_histogram;   // over core references only
};

/// Threshold from override when given, else from the knee. The core is the
/// prefix with cum_weight strictly above the threshold; the histogram bins
/// core publication years into bin_width-year bins aligned to multiples of
/// bin_width.
CoreReport core_report(std::uint32_t cluster_id, const std::vector<std::uint32_t>& cluster_docs,
                       const IncidenceMatrix& m, const ReferenceUniverse& u,
                       const WeightScheme& scheme,
                       std::optional<double> override_threshold = std::nullopt,
                       int bin_width = 5);

} // namespace agemap
