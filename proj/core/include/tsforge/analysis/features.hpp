#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsforge/dataset.hpp"

namespace tsforge {

inline constexpr std::size_t kFeatureCount = 8;

/// Column names, in FeatureVector order.
[[nodiscard]] const std::array<std::string, kFeatureCount>& feature_names();

struct FeatureVector {
    double entropy = 0.0;
    double season = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;  ///< excess
    double non_linear = 0.0;
    double white_noise = 0.0;
    double outliers = 0.0;
    double stationarity = 0.0;  ///< ADF p-value

    [[nodiscard]] std::array<double, kFeatureCount> to_array() const;
    [[nodiscard]] static FeatureVector from_array(const std::array<double, kFeatureCount>& a);
};

/// Normalized Shannon entropy of the raw periodogram at Fourier frequencies
/// j = 1..floor(n/2) of the mean-removed series.
[[nodiscard]] double spectral_entropy(std::span<const double> values);

/// Additive classical decomposition over the interior [begin, end) where the
/// centered 2x12 moving average exists.
struct Decomposition {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<double> trend;
    std::vector<double> detrended;
    std::vector<double> seasonal;
    std::vector<double> remainder;
};

[[nodiscard]] Decomposition classical_decomposition(std::span<const double> values,
                                                    std::size_t period = 12);

/// max(0, 1 - Var(R) / Var(D)); 0 when Var(D) = 0.
[[nodiscard]] double seasonal_strength(std::span<const double> values, std::size_t period = 12);

struct Moments {
    double skewness = 0.0;
    double kurtosis = 0.0;  ///< excess
};

[[nodiscard]] Moments skewness_kurtosis(std::span<const double> values);

/// n * R^2 of the cubic auxiliary regression on two lags (7 added regressors), on
/// the z-scored series.
[[nodiscard]] double terasvirta_nonlinearity(std::span<const double> values);

/// Q = n * sum_{k=1..lags} r_k^2.
[[nodiscard]] double box_pierce(std::span<const double> values, std::size_t lags = 24);

/// Share of points whose decomposition remainder deviates from its median by more
/// than 3 * 1.4826 * MAD; 0 when MAD vanishes.
[[nodiscard]] double outlier_proportion(std::span<const double> values);

struct AdfResult {
    double statistic = 0.0;
    std::size_t lags = 0;
    std::size_t observations = 0;
    double p_value = 0.0;
};

/// Constant-only ADF regression with lag floor(12 (n/100)^{1/4}).
[[nodiscard]] AdfResult adf_test(std::span<const double> values);
[[nodiscard]] double adf_pvalue(std::span<const double> values);

/// MacKinnon approximate p-value (constant, no trend, one I(1) series), clamped
/// to [0.001, 0.999].
[[nodiscard]] double mackinnon_pvalue(double tau);

struct FeatureFailure {
    std::string feature;
    std::string message;
};

struct FeatureOutcome {
    std::string series_id;
    std::optional<FeatureVector> features;
    /// Every feature that failed; non-empty exactly when `features` is empty.
    std::vector<FeatureFailure> failures;
};

[[nodiscard]] FeatureOutcome compute_feature_vector(const TimeSeries& series);

struct StandardizedMatrix {
    std::vector<std::vector<double>> values;
    std::vector<double> mean;
    std::vector<double> sd;  ///< population standard deviation
};

/// Column-wise z-scores. A zero-variance column throws InvalidArgument naming the
/// column (from `names` when given).
[[nodiscard]] StandardizedMatrix standardize_features(
    const std::vector<std::vector<double>>& matrix, std::span<const std::string> names = {});

void write_features_csv(const std::filesystem::path& path,
                        std::span<const std::string> series_ids,
                        std::span<const FeatureVector> features);

}  // namespace tsforge
