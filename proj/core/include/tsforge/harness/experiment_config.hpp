#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tsforge/dataset.hpp"
#include "tsforge/forecasters/config.hpp"
#include "tsforge/synthetic.hpp"
#include "tsforge/transfer/transfer.hpp"

namespace tsforge {

/// Where a corpus comes from: a series CSV file or a generated synthetic set.
struct CorpusSource {
    std::optional<std::filesystem::path> path;
    SeriesFormat format = SeriesFormat::m4;
    struct Synthetic {
        std::size_t count = 0;
        std::size_t length = 120;
        std::uint64_t seed = 1;
        std::vector<synthetic::Family> families;
    };
    std::optional<Synthetic> synthetic;
};

enum class TrainingMode { transfer, scratch, classical };

[[nodiscard]] std::string to_string(TrainingMode mode);

struct ModelSpec {
    Family family = Family::tcn;
    TrainingMode mode = TrainingMode::classical;

    /// "<family>_transfer", "<family>_scratch" or the classical family name.
    [[nodiscard]] std::string name() const;
};

/// Everything a run depends on. Unknown JSON keys are rejected.
struct ExperimentConfig {
    CorpusSource source;
    CorpusSource target;
    CorpusId corpus_id = CorpusId::synthetic;
    std::filesystem::path output_dir = "tsforge-out";
    std::vector<std::filesystem::path> external_forecasts;
    std::vector<std::size_t> horizons{1, 3, 6, 12};
    std::vector<ModelSpec> models;
    std::uint64_t seed = 42;
    std::size_t jobs = 1;
    std::size_t validation_length = kDefaultValidationLength;
    EarlyStopPolicy training;
    FineTunePolicy fine_tune;
    CnnSettings cnn;
    LstmSettings lstm;
    TcnSettings tcn;
    GridPolicy grid = GridPolicy::strict;
    std::size_t cluster_k = 4;
    std::vector<std::size_t> quality_k{2, 3, 4, 5};
    double alpha = 0.05;

    /// Network settings for one family at (w, h).
    [[nodiscard]] ForecasterConfig forecaster_config(Family family, std::size_t input_size,
                                                     std::size_t horizon) const;
};

/// Parses and validates a JSON document; relative paths resolve against `base_dir`.
[[nodiscard]] ExperimentConfig parse_experiment_config(const std::string& json_text,
                                                       const std::filesystem::path& base_dir);

[[nodiscard]] ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical JSON of the effective configuration (defaults filled in).
[[nodiscard]] std::string canonical_config_json(const ExperimentConfig& config);

/// SHA-256 of the canonical JSON without the settings that cannot change results
/// (parallelism degree and output directory).
[[nodiscard]] std::string config_hash(const ExperimentConfig& config);

}  // namespace tsforge
