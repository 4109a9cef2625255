#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "agemap/coupling.hpp"
#include "agemap/hclust.hpp"
#include "agemap/ingest.hpp"
#include "agemap/weighting.hpp"

namespace agemap {

/// Everything the full dual pipeline needs. Populated from an INI-style
/// config file (sections mirroring module names) and/or CLI flags; flags
/// win over file keys.
struct PipelineConfig {
    // [ingest]
    std::string input_path;
    ExportFormat format = ExportFormat::wos_plaintext;
    CsvMapping csv;
    std::optional<int> year_filter_lo;
    std::optional<int> year_filter_hi;

    // [weighting] -- y_min/y_max unset means "use the corpus year range"
    WeightScheme scheme;
    bool scheme_years_set = false;

    // [coupling]
    Contribution contribution = Contribution::squared;
    bool dump_matrices = false;

    // [hclust]
    CutParams cut;

    // [core]
    int bin_width = 5;
    std::map<std::uint32_t, double> threshold_overrides;  // asBC cluster id -> CDM threshold

    // [output]
    std::string output_dir = ".";
};

/// Parses the INI-style config file. Unknown keys are errors.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(std::string_view text, const std::string& origin = "<config>");

} // namespace agemap
