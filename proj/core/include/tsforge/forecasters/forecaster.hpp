#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "tsforge/dataset.hpp"
#include "tsforge/forecasters/classical.hpp"
#include "tsforge/forecasters/config.hpp"
#include "tsforge/forecasters/network.hpp"
#include "tsforge/forecasters/training.hpp"

namespace tsforge {

struct NeuralState {
    NeuralNetwork network;
    /// Min-max scaler of the series (or identity for a corpus-level model).
    ScalerParams scaler;
    TrainingMetadata metadata;
};

/// One forecaster behind a common contract: a neural network with its scaler or a
/// fitted classical model.
struct TrainedForecaster {
    ForecasterConfig config;
    std::variant<NeuralState, ClassicalModel> model;

    [[nodiscard]] bool neural() const noexcept {
        return std::holds_alternative<NeuralState>(model);
    }
    [[nodiscard]] NeuralState& neural_state() { return std::get<NeuralState>(model); }
    [[nodiscard]] const NeuralState& neural_state() const { return std::get<NeuralState>(model); }
    [[nodiscard]] const ClassicalModel& classical_state() const {
        return std::get<ClassicalModel>(model);
    }

    /// h values forecast from `origin` (first forecast index) of `values`. Neural
    /// models read values[origin - w, origin); classical ones condition on
    /// values[0, origin), which must extend the fitting data.
    [[nodiscard]] std::vector<double> forecast_at(std::span<const double> values,
                                                  std::size_t origin) const;
};

/// Untrained network with identity scaler.
[[nodiscard]] TrainedForecaster build_network(const ForecasterConfig& config, std::uint64_t seed,
                                              GridPolicy policy = GridPolicy::strict);

/// Trains on original-scale windows using the forecaster's scaler; returns the
/// trained copy.
[[nodiscard]] TrainedForecaster train_network(TrainedForecaster model,
                                              const SupervisedWindowSet& train,
                                              const SupervisedWindowSet& validation,
                                              const EarlyStopPolicy& policy, std::uint64_t seed);

/// Forward pass on the scaled window, inverse-scaled output of length h.
[[nodiscard]] std::vector<double> predict_network(const TrainedForecaster& model,
                                                  std::span<const double> window);

[[nodiscard]] TrainedForecaster fit_classical_forecaster(Family family,
                                                         std::span<const double> values,
                                                         std::size_t horizon);

/// Per-series protocol: neural models get a scaler fitted on the train range and
/// train on train-range targets with validation-range early stopping; classical
/// models are fitted on train + validation.
[[nodiscard]] TrainedForecaster fit_on_series(const ForecasterConfig& config,
                                              const TimeSeries& series, const SeriesSplit& split,
                                              std::uint64_t seed,
                                              const EarlyStopPolicy& policy = {},
                                              GridPolicy grid = GridPolicy::strict);

}  // namespace tsforge
