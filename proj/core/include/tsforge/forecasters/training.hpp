#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tsforge/dataset.hpp"
#include "tsforge/forecasters/network.hpp"

namespace tsforge {

struct EarlyStopPolicy {
    /// Consecutive epochs without strict improvement before stopping.
    std::size_t patience = 2;
    bool restore_best = true;
    /// Hard cap on epochs; 0 evaluates the starting point only.
    std::size_t max_epochs = 100;
};

/// Patience bookkeeping over a sequence of validation losses.
class EarlyStopTracker {
public:
    explicit EarlyStopTracker(std::size_t patience) : patience_(patience) {}

    /// Records the loss of the next epoch; returns true on strict improvement.
    bool observe(double loss);
    [[nodiscard]] bool should_stop() const noexcept { return stale_ >= patience_; }
    [[nodiscard]] double best_loss() const noexcept { return best_; }
    /// Index (0-based, in observation order) of the best loss.
    [[nodiscard]] std::size_t best_index() const noexcept { return best_index_; }
    [[nodiscard]] std::size_t observed() const noexcept { return observed_; }

private:
    std::size_t patience_;
    std::size_t stale_ = 0;
    std::size_t observed_ = 0;
    std::size_t best_index_ = 0;
    double best_ = std::numeric_limits<double>::infinity();
};

struct TrainingOptions {
    EarlyStopPolicy policy;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    /// Batch-norm running statistics follow the training windows when set.
    bool update_batch_norm = true;
};

struct TrainingMetadata {
    std::size_t epochs_run = 0;
    /// Epoch whose parameters were kept (0 = starting parameters).
    std::size_t best_epoch = 0;
    double best_validation_loss = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    /// Validation loss before training followed by one entry per epoch.
    std::vector<double> validation_history;
};

/// Mean relative-error loss of the network over network-scale windows.
[[nodiscard]] double validation_loss(const NeuralNetwork& network,
                                     const SupervisedWindowSet& windows);

/// Adam with batch size 1 over seeded shuffles of `train` (network scale), with
/// patience-based early stopping on `validation`. Only parameters flagged
/// trainable move. Restores the best snapshot when the policy asks for it.
TrainingMetadata train_network_scaled(NeuralNetwork& network, const SupervisedWindowSet& train,
                                      const SupervisedWindowSet& validation,
                                      const TrainingOptions& options);

}  // namespace tsforge
