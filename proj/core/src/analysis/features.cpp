#include "tsforge/analysis/features.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "tsforge/common/csv.hpp"
#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (const double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x) {
    const double m = mean_of(x);
    double s = 0.0;
    for (const double v : x) {
        s += (v - m) * (v - m);
    }
    return s / static_cast<double>(x.size());
}

double median_of(std::vector<double> x) {
    const std::size_t n = x.size();
    std::sort(x.begin(), x.end());
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

void require(std::span<const double> values, std::size_t min_length, const char* name) {
    if (values.size() < min_length) {
        throw InvalidArgument(std::string(name) + ": needs at least " + std::to_string(min_length) +
                              " observations, got " + std::to_string(values.size()));
    }
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(name) + ": non-finite observation");
        }
    }
}

struct LeastSquares {
    Eigen::VectorXd coef;
    Eigen::VectorXd residual;
    Eigen::Index rank = 0;
};

LeastSquares least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    LeastSquares out;
    out.coef = qr.solve(y);
    out.residual = y - x * out.coef;
    out.rank = qr.rank();
    return out;
}

bool nearly_constant(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double scale = std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
    return *hi - *lo <= 1e-12 * scale;
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names{
        "entropy",    "season",      "skewness", "kurtosis",
        "non_linear", "white_noise", "outliers", "stationarity"};
    return names;
}

std::array<double, kFeatureCount> FeatureVector::to_array() const {
    return {entropy, season, skewness, kurtosis, non_linear, white_noise, outliers, stationarity};
}

FeatureVector FeatureVector::from_array(const std::array<double, kFeatureCount>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

double spectral_entropy(std::span<const double> values) {
    require(values, 24, "spectral_entropy");
    if (nearly_constant(values)) {
        throw InvalidArgument("spectral_entropy: constant series has no spectrum");
    }
    const std::size_t n = values.size();
    const double m = mean_of(values);
    const std::size_t bins = n / 2;
    std::vector<double> power(bins);
    double total = 0.0;
    for (std::size_t j = 1; j <= bins; ++j) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * t) % n) /
                                 static_cast<double>(n);
            re += (values[t] - m) * std::cos(angle);
            im -= (values[t] - m) * std::sin(angle);
        }
        power[j - 1] = re * re + im * im;
        total += power[j - 1];
    }
    double h = 0.0;
    for (const double p : power) {
        const double q = p / total;
        if (q > 0.0) {
            h -= q * std::log(q);
        }
    }
    return std::clamp(h / std::log(static_cast<double>(bins)), 0.0, 1.0);
}

Decomposition classical_decomposition(std::span<const double> values, std::size_t period) {
    if (period < 2 || period % 2 != 0) {
        throw InvalidArgument("classical_decomposition: period must be even and >= 2");
    }
    require(values, 2 * period, "classical_decomposition");
    const std::size_t n = values.size();
    const std::size_t half = period / 2;
    Decomposition d;
    d.begin = half;
    d.end = n - half;
    const std::size_t len = d.end - d.begin;
    d.trend.resize(len);
    d.detrended.resize(len);
    for (std::size_t t = d.begin; t < d.end; ++t) {
        double ma = 0.5 * (values[t - half] + values[t + half]);
        for (std::size_t j = t - half + 1; j < t + half; ++j) {
            ma += values[j];
        }
        ma /= static_cast<double>(period);
        d.trend[t - d.begin] = ma;
        d.detrended[t - d.begin] = values[t] - ma;
    }
    std::vector<double> sum(period, 0.0);
    std::vector<std::size_t> count(period, 0);
    for (std::size_t t = d.begin; t < d.end; ++t) {
        sum[t % period] += d.detrended[t - d.begin];
        count[t % period] += 1;
    }
    std::vector<double> index(period);
    for (std::size_t m = 0; m < period; ++m) {
        index[m] = sum[m] / static_cast<double>(count[m]);
    }
    const double centre = mean_of(index);
    for (auto& v : index) {
        v -= centre;
    }
    d.seasonal.resize(len);
    d.remainder.resize(len);
    for (std::size_t t = d.begin; t < d.end; ++t) {
        d.seasonal[t - d.begin] = index[t % period];
        d.remainder[t - d.begin] = d.detrended[t - d.begin] - index[t % period];
    }
    return d;
}

double seasonal_strength(std::span<const double> values, std::size_t period) {
    const auto d = classical_decomposition(values, period);
    const double var_d = variance_of(d.detrended);
    if (!(var_d > 0.0)) {
        return 0.0;
    }
    return std::clamp(1.0 - variance_of(d.remainder) / var_d, 0.0, 1.0);
}

Moments skewness_kurtosis(std::span<const double> values) {
    require(values, 4, "skewness_kurtosis");
    const double m = mean_of(values);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double v : values) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(values.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0) || nearly_constant(values)) {
        throw InvalidArgument("skewness_kurtosis: zero variance");
    }
    return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

double terasvirta_nonlinearity(std::span<const double> values) {
    require(values, 30, "terasvirta_nonlinearity");
    if (nearly_constant(values)) {
        throw InvalidArgument("terasvirta_nonlinearity: constant series");
    }
    const double m = mean_of(values);
    const double sd = std::sqrt(variance_of(values));
    std::vector<double> z(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        z[t] = (values[t] - m) / sd;
    }
    const auto rows = static_cast<Eigen::Index>(z.size() - 2);
    Eigen::MatrixXd base(rows, 3);
    Eigen::MatrixXd aux(rows, 10);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + 2;
        const double a = z[t - 1];
        const double b = z[t - 2];
        y(r) = z[t];
        base.row(r) << 1.0, a, b;
        aux.row(r) << 1.0, a, b, a * a, a * b, b * b, a * a * a, a * a * b, a * b * b, b * b * b;
    }
    const auto fit = least_squares(base, y);
    const double ssr0 = fit.residual.squaredNorm();
    // An exactly linear series leaves only round-off in the residuals.
    if (ssr0 <= 1e-20 * static_cast<double>(rows)) {
        return 0.0;
    }
    const auto fit_aux = least_squares(aux, fit.residual);
    const double ssr1 = fit_aux.residual.squaredNorm();
    return std::max(0.0, static_cast<double>(rows) * (1.0 - ssr1 / ssr0));
}

double box_pierce(std::span<const double> values, std::size_t lags) {
    if (lags == 0) {
        throw InvalidArgument("box_pierce: lags must be positive");
    }
    require(values, lags + 1, "box_pierce");
    if (nearly_constant(values)) {
        throw InvalidArgument("box_pierce: constant series");
    }
    const std::size_t n = values.size();
    const double m = mean_of(values);
    double denom = 0.0;
    for (const double v : values) {
        denom += (v - m) * (v - m);
    }
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < n; ++t) {
            num += (values[t] - m) * (values[t - k] - m);
        }
        const double r = num / denom;
        q += r * r;
    }
    return static_cast<double>(n) * q;
}

double outlier_proportion(std::span<const double> values) {
    const auto d = classical_decomposition(values, kSeasonalPeriod);
    const double med = median_of(d.remainder);
    std::vector<double> dev(d.remainder.size());
    for (std::size_t i = 0; i < dev.size(); ++i) {
        dev[i] = std::abs(d.remainder[i] - med);
    }
    const double mad = median_of(dev);
    double scale = 1.0;
    for (const double v : values) {
        scale = std::max(scale, std::abs(v));
    }
    // Round-off remainders of an exactly decomposable series count as zero spread.
    if (mad <= 1e-9 * scale) {
        return 0.0;
    }
    const double limit = 3.0 * 1.4826 * mad;
    const auto flagged = std::count_if(dev.begin(), dev.end(), [&](double v) { return v > limit; });
    return static_cast<double>(flagged) / static_cast<double>(values.size());
}

double mackinnon_pvalue(double tau) {
    constexpr double kTauMax = 2.74;
    constexpr double kTauMin = -18.83;
    constexpr double kTauStar = -1.61;
    constexpr std::array<double, 3> kSmall{2.1659, 1.4412, 0.038269};
    constexpr std::array<double, 4> kLarge{1.7339, 0.93202, -0.12745, -0.010368};
    double p = 0.0;
    if (std::isnan(tau)) {
        throw NumericError("mackinnon_pvalue: NaN statistic");
    }
    if (tau > kTauMax) {
        p = 1.0;
    } else if (tau < kTauMin) {
        p = 0.0;
    } else {
        double poly = 0.0;
        double power = 1.0;
        if (tau <= kTauStar) {
            for (const double c : kSmall) {
                poly += c * power;
                power *= tau;
            }
        } else {
            for (const double c : kLarge) {
                poly += c * power;
                power *= tau;
            }
        }
        p = 0.5 * std::erfc(-poly / std::numbers::sqrt2);
    }
    return std::clamp(p, 0.001, 0.999);
}

AdfResult adf_test(std::span<const double> values) {
    require(values, 30, "adf");
    const std::size_t n = values.size();
    const auto lags = static_cast<std::size_t>(
        std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    std::vector<double> dy(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) {
        dy[t] = values[t] - values[t - 1];
    }
    const std::size_t first = lags + 1;
    const auto rows = static_cast<Eigen::Index>(n - first);
    const auto cols = static_cast<Eigen::Index>(2 + lags);
    if (rows <= cols) {
        throw InvalidArgument("adf: too few observations for " + std::to_string(lags) + " lags");
    }
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = first + static_cast<std::size_t>(r);
        y(r) = dy[t];
        x(r, 0) = 1.0;
        x(r, 1) = values[t - 1];
        for (std::size_t i = 1; i <= lags; ++i) {
            x(r, static_cast<Eigen::Index>(1 + i)) = dy[t - i];
        }
    }
    const auto fit = least_squares(x, y);
    if (fit.rank < cols) {
        throw NumericError("adf: singular regression");
    }
    const double s2 = fit.residual.squaredNorm() / static_cast<double>(rows - cols);
    const Eigen::MatrixXd xtx_inv =
        (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(cols, cols));
    const double se = std::sqrt(s2 * xtx_inv(1, 1));
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw NumericError("adf: degenerate standard error");
    }
    AdfResult r;
    r.statistic = fit.coef(1) / se;
    r.lags = lags;
    r.observations = static_cast<std::size_t>(rows);
    r.p_value = mackinnon_pvalue(r.statistic);
    return r;
}

double adf_pvalue(std::span<const double> values) { return adf_test(values).p_value; }

FeatureOutcome compute_feature_vector(const TimeSeries& series) {
    FeatureOutcome out;
    out.series_id = series.id;
    const std::span<const double> v(series.values);
    std::array<double, kFeatureCount> a{};
    const std::array<std::function<double()>, kFeatureCount> steps{
        [&] { return spectral_entropy(v); },
        [&] { return seasonal_strength(v); },
        [&] { return skewness_kurtosis(v).skewness; },
        [&] { return skewness_kurtosis(v).kurtosis; },
        [&] { return terasvirta_nonlinearity(v); },
        [&] { return box_pierce(v); },
        [&] { return outlier_proportion(v); },
        [&] { return adf_pvalue(v); },
    };
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        try {
            a[i] = steps[i]();
            if (!std::isfinite(a[i])) {
                throw NumericError("non-finite value");
            }
        } catch (const Error& e) {
            out.failures.push_back({feature_names()[i], e.what()});
        }
    }
    if (out.failures.empty()) {
        out.features = FeatureVector::from_array(a);
    }
    return out;
}

StandardizedMatrix standardize_features(const std::vector<std::vector<double>>& matrix,
                                        std::span<const std::string> names) {
    if (matrix.empty()) {
        throw InvalidArgument("standardize_features: empty matrix");
    }
    const std::size_t cols = matrix.front().size();
    const double n = static_cast<double>(matrix.size());
    StandardizedMatrix out;
    out.mean.assign(cols, 0.0);
    out.sd.assign(cols, 0.0);
    for (const auto& row : matrix) {
        if (row.size() != cols) {
            throw InvalidArgument("standardize_features: ragged matrix");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            out.mean[j] += row[j];
        }
    }
    for (auto& m : out.mean) {
        m /= n;
    }
    for (const auto& row : matrix) {
        for (std::size_t j = 0; j < cols; ++j) {
            out.sd[j] += (row[j] - out.mean[j]) * (row[j] - out.mean[j]);
        }
    }
    for (std::size_t j = 0; j < cols; ++j) {
        out.sd[j] = std::sqrt(out.sd[j] / n);
        const double scale = std::max(1.0, std::abs(out.mean[j]));
        if (!(out.sd[j] > 1e-12 * scale)) {
            const std::string name = j < names.size() ? names[j] : "column " + std::to_string(j);
            throw InvalidArgument("standardize_features: zero variance in " + name);
        }
    }
    out.values = matrix;
    for (auto& row : out.values) {
        for (std::size_t j = 0; j < cols; ++j) {
            row[j] = (row[j] - out.mean[j]) / out.sd[j];
        }
    }
    return out;
}

void write_features_csv(const std::filesystem::path& path,
                        std::span<const std::string> series_ids,
                        std::span<const FeatureVector> features) {
    if (series_ids.size() != features.size()) {
        throw InvalidArgument("write_features_csv: ids and features differ in length");
    }
    csv::Row header{"series_id"};
    for (const auto& name : feature_names()) {
        header.push_back(name);
    }
    std::vector<csv::Row> rows;
    for (std::size_t i = 0; i < features.size(); ++i) {
        csv::Row row{series_ids[i]};
        for (const double v : features[i].to_array()) {
            row.push_back(csv::format_double(v));
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

}  // namespace tsforge
