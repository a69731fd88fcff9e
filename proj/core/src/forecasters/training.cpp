#include "tsforge/forecasters/training.hpp"

#include <cmath>

#include "tsforge/autodiff/optim.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/common/rng.hpp"

namespace tsforge {

bool EarlyStopTracker::observe(double loss) {
    const std::size_t index = observed_++;
    if (loss < best_) {
        best_ = loss;
        best_index_ = index;
        stale_ = 0;
        return true;
    }
    ++stale_;
    return false;
}

double validation_loss(const NeuralNetwork& network, const SupervisedWindowSet& windows) {
    if (windows.empty()) {
        throw InvalidArgument("validation set is empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto pred = network.predict_scaled(windows.input(i));
        sum += ad::mape_loss(pred, windows.target(i));
    }
    return sum / static_cast<double>(windows.size());
}

TrainingMetadata train_network_scaled(NeuralNetwork& network, const SupervisedWindowSet& train,
                                      const SupervisedWindowSet& validation,
                                      const TrainingOptions& options) {
    const auto& cfg = network.config();
    if (validation.empty()) {
        throw InvalidArgument("train_network: validation set is empty");
    }
    if (train.empty()) {
        throw InvalidArgument("train_network: training set is empty");
    }
    for (const auto* set : {&train, &validation}) {
        if (set->input_size() != cfg.input_size || set->horizon() != cfg.horizon) {
            throw InvalidArgument("train_network: windows are (w=" +
                                  std::to_string(set->input_size()) + ", h=" +
                                  std::to_string(set->horizon()) + ") but the network is (w=" +
                                  std::to_string(cfg.input_size) + ", h=" +
                                  std::to_string(cfg.horizon) + ")");
        }
    }

    TrainingMetadata meta;
    meta.seed = options.seed;
    EarlyStopTracker tracker(options.policy.patience);

    const auto check = [&](double loss, std::size_t epoch) {
        if (!std::isfinite(loss)) {
            throw NumericError("training diverged: validation loss is not finite at epoch " +
                               std::to_string(epoch));
        }
    };

    double baseline = 0.0;
    try {
        baseline = validation_loss(network, validation);
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (epoch 0)");
    }
    check(baseline, 0);
    meta.validation_history.push_back(baseline);
    tracker.observe(baseline);
    ad::ParameterSet best = network.parameters();

    ad::AdamState adam(ad::AdamConfig{options.learning_rate});
    for (std::size_t epoch = 1; epoch <= options.policy.max_epochs; ++epoch) {
        const auto order = shuffled_indices(train.size(), derive_seed(options.seed, epoch));
        try {
            for (const std::size_t row : order) {
                ad::Tape tape;
                ForwardTrace trace;
                const auto out = network.forward(tape, network.parameters(), train.input(row),
                                                 options.update_batch_norm ? &trace : nullptr);
                const auto target = train.target(row);
                const auto loss = ad::mape_loss(
                    tape, out, ad::Tensor::vector({target.begin(), target.end()}));
                const auto grads = tape.backward(loss);
                ad::adam_update(network.parameters(), grads, adam);
                if (options.update_batch_norm) {
                    network.update_batch_norm(trace);
                }
            }
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ")");
        }
        double loss = 0.0;
        try {
            loss = validation_loss(network, validation);
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ")");
        }
        check(loss, epoch);
        meta.validation_history.push_back(loss);
        meta.epochs_run = epoch;
        if (tracker.observe(loss)) {
            best = network.parameters();
        }
        if (tracker.should_stop()) {
            break;
        }
    }
    meta.best_epoch = tracker.best_index();
    meta.best_validation_loss = tracker.best_loss();
    if (options.policy.restore_best) {
        network.parameters() = std::move(best);
    } else {
        meta.best_validation_loss = meta.validation_history.back();
        meta.best_epoch = meta.epochs_run;
    }
    return meta;
}

}  // namespace tsforge
