#include "tsforge/forecasters/forecaster.hpp"

#include <cmath>
#include <string>

#include "tsforge/common/error.hpp"

namespace tsforge {

std::vector<double> TrainedForecaster::forecast_at(std::span<const double> values,
                                                   std::size_t origin) const {
    if (origin > values.size()) {
        throw InvalidArgument("forecast origin " + std::to_string(origin) +
                              " beyond series length " + std::to_string(values.size()));
    }
    if (neural()) {
        const std::size_t w = config.input_size;
        if (origin < w) {
            throw InvalidArgument("forecast origin " + std::to_string(origin) +
                                  " leaves fewer than w = " + std::to_string(w) + " inputs");
        }
        return predict_network(*this, values.subspan(origin - w, w));
    }
    return forecast_classical(classical_state(), values.first(origin), config.horizon);
}

TrainedForecaster build_network(const ForecasterConfig& config, std::uint64_t seed,
                                GridPolicy policy) {
    if (!is_neural(config.family)) {
        throw InvalidArgument(to_string(config.family) + " is not a neural family");
    }
    TrainedForecaster out;
    out.config = config;
    NeuralState state;
    state.network = NeuralNetwork(config, seed, policy);
    state.metadata.seed = seed;
    out.model = std::move(state);
    return out;
}

TrainedForecaster train_network(TrainedForecaster model, const SupervisedWindowSet& train,
                                const SupervisedWindowSet& validation,
                                const EarlyStopPolicy& policy, std::uint64_t seed) {
    if (!model.neural()) {
        throw InvalidArgument("train_network needs a neural forecaster");
    }
    auto& state = model.neural_state();
    TrainingOptions options;
    options.policy = policy;
    options.learning_rate = model.config.learning_rate();
    options.seed = seed;
    state.metadata = train_network_scaled(state.network, to_network_scale(train, state.scaler),
                                          to_network_scale(validation, state.scaler), options);
    return model;
}

std::vector<double> predict_network(const TrainedForecaster& model,
                                    std::span<const double> window) {
    const auto& state = model.neural_state();
    if (window.size() != model.config.input_size) {
        throw InvalidArgument("input window has length " + std::to_string(window.size()) +
                              ", network expects " + std::to_string(model.config.input_size));
    }
    for (const double v : window) {
        if (!std::isfinite(v)) {
            throw NumericError("non-finite value in forecast input window");
        }
    }
    const auto scaled = to_network_scale(window, state.scaler);
    return from_network_scale(state.network.predict_scaled(scaled), state.scaler);
}

TrainedForecaster fit_classical_forecaster(Family family, std::span<const double> values,
                                           std::size_t horizon) {
    if (horizon == 0) {
        throw InvalidArgument("horizon must be positive");
    }
    TrainedForecaster out;
    out.config.family = family;
    out.config.horizon = horizon;
    out.config.input_size = 0;
    out.model = fit_classical(family, values);
    return out;
}

TrainedForecaster fit_on_series(const ForecasterConfig& config, const TimeSeries& series,
                                const SeriesSplit& split, std::uint64_t seed,
                                const EarlyStopPolicy& policy, GridPolicy grid) {
    const std::span<const double> values(series.values);
    if (!is_neural(config.family)) {
        return fit_classical_forecaster(config.family, values.first(split.validation.end),
                                        config.horizon);
    }
    auto model = build_network(config, seed, grid);
    model.neural_state().scaler =
        fit_scaler(values.subspan(split.train.begin, split.train.size()));
    const auto train =
        make_supervised_windows(values, config.input_size, config.horizon, split.train);
    const auto val =
        make_supervised_windows(values, config.input_size, config.horizon, split.validation);
    return train_network(std::move(model), train, val, policy, seed);
}

}  // namespace tsforge
