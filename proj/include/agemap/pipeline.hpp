#pragma once

#include <functional>
#include <string>

#include "agemap/config.hpp"

namespace agemap {

/// Runs the dual cBC/asBC pipeline and writes every artifact into
/// cfg.output_dir. Throws agemap::Error subclasses with the failing stage
/// named in the message. `log` receives one line per stage.
void run_pipeline(const PipelineConfig& cfg,
                  const std::function<void(const std::string&)>& log = {});

} // namespace agemap
