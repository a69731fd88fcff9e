#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsforge/dataset.hpp"
#include "tsforge/forecasters/forecaster.hpp"

namespace tsforge {

enum class CorpusId { set_B_like, set_B_M3_like, synthetic };

[[nodiscard]] std::string to_string(CorpusId id);
[[nodiscard]] CorpusId parse_corpus_id(const std::string& name);

/// Windows pooled from many series, each scaled to network scale with its own
/// series' scaler before concatenation.
struct SourceCorpus {
    CorpusId id = CorpusId::synthetic;
    std::size_t input_size = 0;
    std::size_t horizon = 0;
    SupervisedWindowSet train;
    SupervisedWindowSet validation;
    std::vector<std::string> series_ids;
    std::vector<ScalerParams> scalers;
    /// Series left out (too short, constant train range, ...).
    std::vector<RejectedSeries> skipped;
};

/// Throws InvalidArgument for an empty series set or when every series is skipped.
[[nodiscard]] SourceCorpus assemble_source_corpus(std::span<const TimeSeries> series,
                                                  std::size_t input_size, std::size_t horizon,
                                                  CorpusId id = CorpusId::synthetic,
                                                  const SplitOptions& split = {});

/// A pre-trained network with where it came from. Treated as read-only; every
/// fine-tune works on a copy.
struct GlobalModel {
    TrainedForecaster forecaster;
    CorpusId corpus = CorpusId::synthetic;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
};

[[nodiscard]] GlobalModel pretrain_global(const SourceCorpus& corpus,
                                          const ForecasterConfig& config, std::uint64_t seed,
                                          const EarlyStopPolicy& policy = {},
                                          GridPolicy grid = GridPolicy::strict);

struct FineTunePolicy {
    double learning_rate = 5e-6;
    std::size_t patience = 2;
    std::size_t max_epochs = 100;
};

/// Copies the global model, freezes everything but the dense head, and adapts the
/// head on the target's own scaled train windows with early stopping on its
/// validation windows.
[[nodiscard]] TrainedForecaster fine_tune_target(const GlobalModel& global,
                                                 const TimeSeries& target,
                                                 const FineTunePolicy& policy,
                                                 std::uint64_t seed,
                                                 const SplitOptions& split = {});

}  // namespace tsforge
