#include "tsforge/evaluation/metrics.hpp"

#include <cmath>
#include <string>

#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> p, const char* name) {
    if (y.size() != p.size()) {
        throw InvalidArgument(std::string(name) + ": " + std::to_string(y.size()) +
                              " actuals vs " + std::to_string(p.size()) + " predictions");
    }
    if (y.empty()) {
        throw InvalidArgument(std::string(name) + ": empty input");
    }
}

}  // namespace

double ape(double actual, double predicted) {
    if (!(std::abs(actual) > kMapeZeroGuard)) {
        throw InvalidArgument("mape: actual value too close to zero");
    }
    return std::abs((actual - predicted) / actual);
}

double sape(double actual, double predicted) {
    const double denom = std::abs(actual) + std::abs(predicted);
    if (!(denom > kSmapeZeroGuard)) {
        throw InvalidArgument("smape: actual and prediction both zero");
    }
    return std::abs(actual - predicted) / denom;
}

double mape(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted, "mape");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!(std::abs(actual[i]) > kMapeZeroGuard)) {
            throw InvalidArgument("mape: actual value at index " + std::to_string(i) +
                                  " is zero");
        }
        sum += std::abs((actual[i] - predicted[i]) / actual[i]);
    }
    return sum / static_cast<double>(actual.size());
}

double smape(std::span<const double> actual, std::span<const double> predicted) {
    check_lengths(actual, predicted, "smape");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double denom = std::abs(actual[i]) + std::abs(predicted[i]);
        if (!(denom > kSmapeZeroGuard)) {
            throw InvalidArgument("smape: actual and prediction both zero at index " +
                                  std::to_string(i));
        }
        sum += std::abs(actual[i] - predicted[i]) / denom;
    }
    return sum / static_cast<double>(actual.size());
}

}  // namespace tsforge
