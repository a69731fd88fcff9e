#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tsforge/autodiff/tensor.hpp"

namespace tsforge::ad {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment estimates per trainable parameter plus the step counter.
struct AdamState {
    AdamConfig config;
    std::map<std::string, Tensor> first_moment;
    std::map<std::string, Tensor> second_moment;
    std::uint64_t step = 0;

    AdamState() = default;
    explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

/// One bias-corrected Adam step. `grads` must name exactly the trainable parameters;
/// a gradient for a frozen parameter throws InvalidArgument and leaves every
/// parameter untouched.
void adam_update(ParameterSet& params, const GradientMap& grads, AdamState& state);

}  // namespace tsforge::ad
