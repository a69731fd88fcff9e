#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsforge/forecasters/config.hpp"

namespace tsforge {

/// Smoothing-parameter grid {0.05, 0.10, ..., 0.95} shared by theta and ETS fits.
[[nodiscard]] const std::vector<double>& smoothing_grid();

// ---------------------------------------------------------------------------
// Theta

struct ThetaState {
    bool seasonal = false;
    /// Multiplicative indices by absolute month position (t mod 12); all 1 when
    /// the seasonal test does not fire.
    std::array<double, 12> season_index{};
    double intercept = 0.0;  ///< least-squares trend (theta = 0 line)
    double slope = 0.0;
    double alpha = 0.5;      ///< SES weight on the theta = 2 line
    double level = 0.0;      ///< SES level after the last absorbed observation
    std::size_t observations = 0;
};

/// `|r12| > 1.645 sqrt((1 + 2 sum_{i<12} r_i^2) / n)`.
[[nodiscard]] bool seasonality_test(std::span<const double> values, std::size_t period = 12);

[[nodiscard]] ThetaState fit_theta(std::span<const double> values);
void theta_update(ThetaState& state, double observation);
[[nodiscard]] std::vector<double> theta_forecast(const ThetaState& state, std::size_t horizon);

// ---------------------------------------------------------------------------
// Exponential smoothing

enum class EtsKind {
    simple,       ///< level only
    holt,         ///< level + additive trend
    holt_winters  ///< level + additive trend + additive 12-month season
};

[[nodiscard]] std::string to_string(EtsKind kind);

struct EtsState {
    EtsKind kind = EtsKind::simple;
    double alpha = 0.5;
    double beta = 0.0;
    double gamma = 0.0;
    double level = 0.0;
    double trend = 0.0;
    /// Seasonal terms by absolute month position (t mod 12).
    std::array<double, 12> season{};
    std::size_t observations = 0;
    double aicc = 0.0;
};

/// Initial states for one candidate from the first observations of `values`;
/// returns the number of observations consumed by the initialization.
std::size_t ets_initialize(EtsState& state, std::span<const double> values);
/// One-step-ahead prediction from the current state.
[[nodiscard]] double ets_one_step(const EtsState& state);
void ets_update(EtsState& state, double observation);
[[nodiscard]] std::vector<double> ets_forecast(const EtsState& state, std::size_t horizon);

/// Grid-searches every candidate and keeps the smallest AICc (Gaussian likelihood
/// of one-step errors over the observations after the first seasonal cycle).
[[nodiscard]] EtsState fit_ets(std::span<const double> values);

// ---------------------------------------------------------------------------
// Seasonal naive

struct SeasonalNaiveState {
    /// The last 12 observations, oldest first.
    std::array<double, 12> cycle{};
    std::size_t observations = 0;
};

[[nodiscard]] SeasonalNaiveState fit_seasonal_naive(std::span<const double> values);
void seasonal_naive_update(SeasonalNaiveState& state, double observation);
[[nodiscard]] std::vector<double> seasonal_naive_forecast(const SeasonalNaiveState& state,
                                                          std::size_t horizon);

// ---------------------------------------------------------------------------

using ClassicalState = std::variant<ThetaState, EtsState, SeasonalNaiveState>;

/// A fitted classical model together with the series it was fitted on, so later
/// histories can be checked for contiguity.
struct ClassicalModel {
    Family family = Family::theta;
    ClassicalState state;
    std::vector<double> fitted_values;
};

/// Requires at least two full seasonal periods.
[[nodiscard]] ClassicalModel fit_classical(Family family, std::span<const double> values);

/// Advances the fitted states over history[fitted_values.size() ..] without
/// refitting, then extrapolates h steps. `history` must start with the fitted values.
[[nodiscard]] std::vector<double> forecast_classical(const ClassicalModel& model,
                                                     std::span<const double> history,
                                                     std::size_t horizon);

}  // namespace tsforge
