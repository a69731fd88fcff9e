#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tsforge/autodiff/tape.hpp"

namespace tsforge::ad {

/// Builds a scalar loss on `tape` from `params`; the gradient checker calls it once
/// per perturbation, so it must be a pure function of the parameters.
using LossBuilder = std::function<NodeId(Tape& tape, const ParameterSet& params)>;

struct GradientCheckReport {
    double max_relative_error = 0.0;
    std::string worst_parameter;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    std::size_t entries_checked = 0;
    double tolerance = 0.0;
    bool passed = true;
};

/// Compares reverse-mode gradients with central differences for every entry of
/// every trainable parameter. Relative error is |a - n| / max(|a|, |n|, floor); the
/// floor keeps round-off on near-zero gradients from dominating the ratio.
[[nodiscard]] GradientCheckReport gradient_check(const LossBuilder& build,
                                                 const ParameterSet& params, double tolerance,
                                                 double step = 1e-5, double floor = 1e-6);

}  // namespace tsforge::ad
