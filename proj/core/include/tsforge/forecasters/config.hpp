#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsforge/autodiff/ops.hpp"

namespace tsforge {

enum class Family { cnn, lstm, tcn, theta, ets, seasonal_naive };

[[nodiscard]] std::string to_string(Family family);
[[nodiscard]] Family parse_family(const std::string& name);
[[nodiscard]] bool is_neural(Family family) noexcept;

// Defaults are the most frequent architectures found by the original search.

struct CnnSettings {
    std::size_t layers = 2;
    std::vector<std::size_t> filters{12, 12};
    std::vector<std::size_t> kernels{12, 2};
    bool max_pooling = false;
    ad::Activation activation = ad::Activation::tanh;
    double learning_rate = 1e-4;
};

struct LstmSettings {
    std::size_t units = 84;
    ad::Activation activation = ad::Activation::relu;
    bool return_sequences = true;
    double learning_rate = 1e-3;
};

struct TcnSettings {
    std::size_t filters = 12;
    std::size_t kernel = 12;
    std::vector<std::size_t> dilations{1, 2, 4, 8, 16};
    ad::Activation activation = ad::Activation::tanh;
    bool return_sequences = false;
    double learning_rate = 1e-3;
};

struct ForecasterConfig {
    Family family = Family::tcn;
    std::size_t input_size = 12;
    std::size_t horizon = 3;
    CnnSettings cnn;
    LstmSettings lstm;
    TcnSettings tcn;

    /// Pre-training learning rate of the configured neural family.
    [[nodiscard]] double learning_rate() const;
};

enum class GridPolicy {
    strict,   ///< every setting must lie on the architecture search grid
    relaxed,  ///< only structural validity is checked (used for reduced-width checks)
};

/// Throws InvalidArgument describing the first violated bound.
void validate(const ForecasterConfig& config, GridPolicy policy = GridPolicy::strict);

}  // namespace tsforge
