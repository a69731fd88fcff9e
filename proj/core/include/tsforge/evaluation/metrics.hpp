#pragma once

#include <span>

namespace tsforge {

/// Actuals with |y| at or below this are rejected by mape.
inline constexpr double kMapeZeroGuard = 1e-8;
/// Pairs with |y| + |p| at or below this are rejected by smape.
inline constexpr double kSmapeZeroGuard = 1e-12;

/// mean |(y - p) / y|.
[[nodiscard]] double mape(std::span<const double> actual, std::span<const double> predicted);

/// mean |y - p| / (|y| + |p|), bounded in [0, 1].
[[nodiscard]] double smape(std::span<const double> actual, std::span<const double> predicted);

/// Single-term contributions, shared with record aggregation.
[[nodiscard]] double ape(double actual, double predicted);
[[nodiscard]] double sape(double actual, double predicted);

}  // namespace tsforge
