#include "tsforge/forecasters/config.hpp"

#include <algorithm>

#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

bool on_width_grid(std::size_t v) { return v >= 12 && v <= 132 && (v - 12) % 24 == 0; }
bool on_kernel_grid(std::size_t v) { return v >= 2 && v <= 12 && v % 2 == 0; }
bool on_rate_grid(double lr) { return lr == 1e-3 || lr == 1e-4 || lr == 1e-5; }

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw InvalidArgument("invalid forecaster config: " + message);
    }
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::cnn:
            return "cnn";
        case Family::lstm:
            return "lstm";
        case Family::tcn:
            return "tcn";
        case Family::theta:
            return "theta";
        case Family::ets:
            return "ets";
        case Family::seasonal_naive:
            return "seasonal_naive";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    for (const auto f : {Family::cnn, Family::lstm, Family::tcn, Family::theta, Family::ets,
                         Family::seasonal_naive}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw InvalidArgument("unknown model family '" + name + "'");
}

bool is_neural(Family family) noexcept {
    return family == Family::cnn || family == Family::lstm || family == Family::tcn;
}

double ForecasterConfig::learning_rate() const {
    switch (family) {
        case Family::cnn:
            return cnn.learning_rate;
        case Family::lstm:
            return lstm.learning_rate;
        case Family::tcn:
            return tcn.learning_rate;
        default:
            throw InvalidArgument(to_string(family) + " has no learning rate");
    }
}

void validate(const ForecasterConfig& config, GridPolicy policy) {
    require(config.input_size >= 1, "input size must be >= 1");
    require(config.horizon >= 1, "horizon must be >= 1");
    const bool strict = policy == GridPolicy::strict;
    switch (config.family) {
        case Family::cnn: {
            const auto& c = config.cnn;
            require(c.layers == 1 || c.layers == 2, "cnn layers must be 1 or 2");
            require(c.filters.size() == c.layers && c.kernels.size() == c.layers,
                    "cnn needs one filter count and one kernel size per layer");
            for (std::size_t i = 0; i < c.layers; ++i) {
                require(c.filters[i] >= 1 && c.kernels[i] >= 1, "cnn widths must be positive");
                if (strict) {
                    require(on_width_grid(c.filters[i]), "cnn filters must be 12..132 step 24");
                    require(on_kernel_grid(c.kernels[i]), "cnn kernel must be 2..12 step 2");
                }
            }
            require(!c.max_pooling || config.input_size >= 2,
                    "max pooling needs an input of at least 2 steps");
            require(c.learning_rate > 0.0, "learning rate must be positive");
            if (strict) {
                require(on_rate_grid(c.learning_rate), "learning rate must be 1e-3, 1e-4 or 1e-5");
            }
            break;
        }
        case Family::lstm: {
            const auto& l = config.lstm;
            require(l.units >= 1, "lstm units must be positive");
            require(l.learning_rate > 0.0, "learning rate must be positive");
            if (strict) {
                require(on_width_grid(l.units), "lstm units must be 12..132 step 24");
                require(on_rate_grid(l.learning_rate), "learning rate must be 1e-3, 1e-4 or 1e-5");
            }
            break;
        }
        case Family::tcn: {
            const auto& t = config.tcn;
            require(t.filters >= 1 && t.kernel >= 1, "tcn widths must be positive");
            require(!t.dilations.empty() &&
                        std::all_of(t.dilations.begin(), t.dilations.end(),
                                    [](std::size_t d) { return d >= 1; }),
                    "tcn dilations must be positive");
            require(t.learning_rate > 0.0, "learning rate must be positive");
            if (strict) {
                require(on_width_grid(t.filters), "tcn filters must be 12..132 step 24");
                require(on_kernel_grid(t.kernel), "tcn kernel must be 2..12 step 2");
                const std::vector<std::size_t> short_set{1, 2, 4, 8};
                const std::vector<std::size_t> long_set{1, 2, 4, 8, 16};
                require(t.dilations == short_set || t.dilations == long_set,
                        "tcn dilations must be [1,2,4,8] or [1,2,4,8,16]");
                require(on_rate_grid(t.learning_rate), "learning rate must be 1e-3, 1e-4 or 1e-5");
            }
            break;
        }
        case Family::theta:
        case Family::ets:
        case Family::seasonal_naive:
            break;
    }
}

}  // namespace tsforge
