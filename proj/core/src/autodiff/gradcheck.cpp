#include "tsforge/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "tsforge/common/error.hpp"

namespace tsforge::ad {

namespace {

double evaluate(const LossBuilder& build, const ParameterSet& params) {
    Tape tape;
    const NodeId loss = build(tape, params);
    if (tape.value(loss).size() != 1) {
        throw ShapeError("gradient_check: loss builder must return a scalar");
    }
    return tape.value(loss)[0];
}

}  // namespace

GradientCheckReport gradient_check(const LossBuilder& build, const ParameterSet& params,
                                   double tolerance, double step, double floor) {
    Tape tape;
    const NodeId loss = build(tape, params);
    const GradientMap analytic = tape.backward(loss);

    GradientCheckReport report;
    report.tolerance = tolerance;
    ParameterSet probe = params;
    for (const auto& [name, grad] : analytic) {
        Tensor& value = probe.at(name).value;
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double original = value[i];
            value[i] = original + step;
            const double up = evaluate(build, probe);
            value[i] = original - step;
            const double down = evaluate(build, probe);
            value[i] = original;
            const double numeric = (up - down) / (2.0 * step);
            const double a = grad[i];
            const double denom = std::max({std::abs(a), std::abs(numeric), floor});
            const double rel = std::abs(a - numeric) / denom;
            ++report.entries_checked;
            if (rel > report.max_relative_error || report.worst_parameter.empty()) {
                report.max_relative_error = rel;
                report.worst_parameter = name;
                report.worst_index = i;
                report.worst_analytic = a;
                report.worst_numeric = numeric;
            }
        }
    }
    report.passed = report.max_relative_error < tolerance;
    return report;
}

}  // namespace tsforge::ad
