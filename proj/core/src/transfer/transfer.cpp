#include "tsforge/transfer/transfer.hpp"

#include "tsforge/common/error.hpp"

namespace tsforge {

std::string to_string(CorpusId id) {
    switch (id) {
        case CorpusId::set_B_like:
            return "set_B_like";
        case CorpusId::set_B_M3_like:
            return "set_B_M3_like";
        case CorpusId::synthetic:
            return "synthetic";
    }
    return "unknown";
}

CorpusId parse_corpus_id(const std::string& name) {
    for (const auto id : {CorpusId::set_B_like, CorpusId::set_B_M3_like, CorpusId::synthetic}) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw InvalidArgument("unknown corpus id '" + name + "'");
}

SourceCorpus assemble_source_corpus(std::span<const TimeSeries> series, std::size_t input_size,
                                    std::size_t horizon, CorpusId id,
                                    const SplitOptions& split_options) {
    if (series.empty()) {
        throw InvalidArgument("source corpus needs at least one series");
    }
    SourceCorpus corpus;
    corpus.id = id;
    corpus.input_size = input_size;
    corpus.horizon = horizon;
    corpus.train = SupervisedWindowSet(input_size, horizon);
    corpus.validation = SupervisedWindowSet(input_size, horizon);
    for (const auto& ts : series) {
        try {
            const auto split = split_series(ts, split_options);
            const std::span<const double> values(ts.values);
            const auto scaler = fit_scaler(values.subspan(split.train.begin, split.train.size()));
            auto train = make_supervised_windows(values, input_size, horizon, split.train);
            auto val = make_supervised_windows(values, input_size, horizon, split.validation);
            corpus.train.append(to_network_scale(train, scaler));
            corpus.validation.append(to_network_scale(val, scaler));
            corpus.series_ids.push_back(ts.id);
            corpus.scalers.push_back(scaler);
        } catch (const Error& e) {
            corpus.skipped.push_back({ts.id, e.what()});
        }
    }
    if (corpus.series_ids.empty()) {
        throw InvalidArgument("every source series was skipped (" +
                              std::to_string(corpus.skipped.size()) + ")");
    }
    return corpus;
}

GlobalModel pretrain_global(const SourceCorpus& corpus, const ForecasterConfig& config,
                            std::uint64_t seed, const EarlyStopPolicy& policy, GridPolicy grid) {
    if (corpus.input_size != config.input_size || corpus.horizon != config.horizon) {
        throw InvalidArgument("corpus windows (w=" + std::to_string(corpus.input_size) +
                              ", h=" + std::to_string(corpus.horizon) +
                              ") do not match the model configuration");
    }
    GlobalModel global;
    global.forecaster = build_network(config, seed, grid);
    global.corpus = corpus.id;
    global.seed = seed;
    auto& state = global.forecaster.neural_state();
    TrainingOptions options;
    options.policy = policy;
    options.learning_rate = config.learning_rate();
    options.seed = seed;
    state.metadata = train_network_scaled(state.network, corpus.train, corpus.validation, options);
    global.epochs = state.metadata.epochs_run;
    return global;
}

TrainedForecaster fine_tune_target(const GlobalModel& global, const TimeSeries& target,
                                   const FineTunePolicy& policy, std::uint64_t seed,
                                   const SplitOptions& split_options) {
    const auto& config = global.forecaster.config;
    if (policy.learning_rate <= 0.0 || policy.learning_rate >= config.learning_rate()) {
        throw InvalidArgument("fine-tune learning rate must be positive and below the "
                              "pre-training rate");
    }
    const auto split = split_series(target, split_options);
    const std::span<const double> values(target.values);

    TrainedForecaster tuned = global.forecaster;
    auto& state = tuned.neural_state();
    state.scaler = fit_scaler(values.subspan(split.train.begin, split.train.size()));
    const auto heads = NeuralNetwork::head_parameter_names();
    state.network.parameters().freeze_all_except(heads);

    const auto train = to_network_scale(
        make_supervised_windows(values, config.input_size, config.horizon, split.train),
        state.scaler);
    const auto val = to_network_scale(
        make_supervised_windows(values, config.input_size, config.horizon, split.validation),
        state.scaler);

    TrainingOptions options;
    options.policy.patience = policy.patience;
    options.policy.max_epochs = policy.max_epochs;
    options.policy.restore_best = true;
    options.learning_rate = policy.learning_rate;
    options.seed = seed;
    options.update_batch_norm = false;
    state.metadata = train_network_scaled(state.network, train, val, options);
    return tuned;
}

}  // namespace tsforge
