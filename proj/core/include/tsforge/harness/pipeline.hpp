#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsforge/harness/experiment_config.hpp"
#include "tsforge/harness/manifest.hpp"

namespace tsforge {

enum class Stage { ingest, pretrain, finetune, evaluate, features, cluster, rank, report };

[[nodiscard]] std::string to_string(Stage stage);
[[nodiscard]] Stage parse_stage(const std::string& name);
[[nodiscard]] const std::vector<Stage>& all_stages();

/// Stages that must be complete before `stage` can run.
[[nodiscard]] std::vector<Stage> stage_prerequisites(Stage stage);

struct PipelineOptions {
    /// Run this stage and whatever it needs; every stage when empty.
    std::optional<Stage> stage;
    /// Reuse per-task model artifacts left by an interrupted stage.
    bool resume = false;
    std::function<void(const std::string&)> log;
};

/// Runs the requested stages under config.output_dir. Stages recorded as complete
/// in a manifest with the same config hash (and intact files) are skipped; a
/// different hash discards the previous run's files first. Per-task failures are
/// recorded in the manifest and do not stop the run.
RunManifest run_pipeline(const ExperimentConfig& config, const PipelineOptions& options = {});

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. Exceptions escape
/// only after every task has finished; the lowest-index one is rethrown.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// File-system safe form of a series id.
[[nodiscard]] std::string sanitize_name(const std::string& name);

}  // namespace tsforge
