#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsforge/autodiff/ops.hpp"
#include "tsforge/autodiff/tape.hpp"
#include "tsforge/autodiff/tensor.hpp"
#include "tsforge/forecasters/config.hpp"

namespace tsforge {

/// Per-channel statistics of a batch-norm input observed during one forward pass.
struct BatchNormObservation {
    std::string layer;  ///< parameter prefix, e.g. "cnn.bn1"
    std::vector<double> mean;
    std::vector<double> variance;
};

struct ForwardTrace {
    std::vector<BatchNormObservation> batch_norm;
};

/// A CNN, LSTM or TCN graph with its parameters. Every family ends in a dense
/// output head ("head.weight", "head.bias") of width h; that head is the only
/// part adapted during transfer fine-tuning.
class NeuralNetwork {
public:
    static constexpr double kBatchNormMomentum = 0.99;
    static constexpr double kBatchNormEpsilon = 1e-3;

    NeuralNetwork() = default;
    /// Glorot-uniform kernels, zero biases, forget-gate bias 1, identity batch norm.
    NeuralNetwork(ForecasterConfig config, std::uint64_t seed,
                  GridPolicy policy = GridPolicy::strict);
    /// Wraps existing parameters (e.g. a loaded artifact); names and shapes are checked.
    NeuralNetwork(ForecasterConfig config, ad::ParameterSet parameters);

    [[nodiscard]] const ForecasterConfig& config() const noexcept { return config_; }
    [[nodiscard]] ad::ParameterSet& parameters() noexcept { return params_; }
    [[nodiscard]] const ad::ParameterSet& parameters() const noexcept { return params_; }

    /// Records the graph for one input window (length w, network scale) using
    /// `params`, returning the [h] output node.
    ad::NodeId forward(ad::Tape& tape, const ad::ParameterSet& params,
                       std::span<const double> input, ForwardTrace* trace = nullptr) const;
    ad::NodeId forward(ad::Tape& tape, std::span<const double> input,
                       ForwardTrace* trace = nullptr) const {
        return forward(tape, params_, input, trace);
    }

    /// Forward pass without gradients, network scale in and out.
    [[nodiscard]] std::vector<double> predict_scaled(std::span<const double> input) const;

    /// Folds observed batch statistics into the running statistics (exponential
    /// moving average with kBatchNormMomentum).
    void update_batch_norm(const ForwardTrace& trace);

    [[nodiscard]] static std::vector<std::string> head_parameter_names();
    /// Names of the parameter tensors this configuration must have, in build order.
    [[nodiscard]] std::vector<std::string> expected_parameter_names() const;
    /// TCN: 1 + 2 (k - 1) * sum(dilations); other families return the input size.
    [[nodiscard]] std::size_t receptive_field() const;

private:
    ad::NodeId forward_cnn(ad::Tape& tape, const ad::ParameterSet& params, ad::NodeId x,
                           ForwardTrace* trace) const;
    ad::NodeId forward_lstm(ad::Tape& tape, const ad::ParameterSet& params,
                            std::span<const double> input) const;
    ad::NodeId forward_tcn(ad::Tape& tape, const ad::ParameterSet& params, ad::NodeId x) const;

    ForecasterConfig config_;
    ad::ParameterSet params_;
};

}  // namespace tsforge
