#pragma once

#include <filesystem>
#include <string>

#include "tsforge/harness/experiment_config.hpp"
#include "tsforge/harness/manifest.hpp"

namespace tsforge {

/// Markdown report assembled from the files of a run directory. Sections whose
/// stage has not completed are marked "not run".
[[nodiscard]] std::string render_report(const ExperimentConfig& config,
                                        const RunManifest& manifest,
                                        const std::filesystem::path& output_dir);

}  // namespace tsforge
