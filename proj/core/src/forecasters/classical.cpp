#include "tsforge/forecasters/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

constexpr std::size_t kPeriod = 12;

std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (const double v : x) {
        mean += v;
    }
    mean /= n;
    double denom = 0.0;
    for (const double v : x) {
        denom += (v - mean) * (v - mean);
    }
    std::vector<double> r(max_lag + 1, 0.0);
    if (denom <= 0.0) {
        return r;
    }
    r[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag && k < x.size(); ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t) {
            num += (x[t] - mean) * (x[t + k] - mean);
        }
        r[k] = num / denom;
    }
    return r;
}

/// Multiplicative seasonal indices from a centered 2x12 moving average; empty when
/// the decomposition is not defined (non-positive data or trend).
std::vector<double> multiplicative_indices(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2 * kPeriod || std::any_of(y.begin(), y.end(), [](double v) { return v <= 0.0; })) {
        return {};
    }
    std::array<double, kPeriod> sum{};
    std::array<std::size_t, kPeriod> count{};
    for (std::size_t t = kPeriod / 2; t + kPeriod / 2 < n; ++t) {
        double ma = 0.5 * (y[t - 6] + y[t + 6]);
        for (std::size_t j = t - 5; j <= t + 5; ++j) {
            ma += y[j];
        }
        ma /= static_cast<double>(kPeriod);
        if (ma <= 0.0) {
            return {};
        }
        sum[t % kPeriod] += y[t] / ma;
        count[t % kPeriod] += 1;
    }
    std::vector<double> idx(kPeriod);
    double total = 0.0;
    for (std::size_t m = 0; m < kPeriod; ++m) {
        idx[m] = sum[m] / static_cast<double>(count[m]);
        total += idx[m];
    }
    const double norm = static_cast<double>(kPeriod) / total;
    for (auto& v : idx) {
        v *= norm;
    }
    return idx;
}

void require_length(std::span<const double> values, const char* model) {
    if (values.size() < 2 * kPeriod) {
        throw InvalidArgument(std::string(model) + " needs at least " +
                              std::to_string(2 * kPeriod) + " observations, got " +
                              std::to_string(values.size()));
    }
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(model) + ": non-finite observation");
        }
    }
}

double aicc(double sse, std::size_t n, std::size_t k) {
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double sigma2 = std::max(sse / nn, std::numeric_limits<double>::min());
    const double loglik = -0.5 * nn * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
    return -2.0 * loglik + 2.0 * kk + 2.0 * kk * (kk + 1.0) / (nn - kk - 1.0);
}

/// Smoothing parameters + initial states + noise variance.
std::size_t ets_parameter_count(EtsKind kind) {
    switch (kind) {
        case EtsKind::simple:
            return 3;
        case EtsKind::holt:
            return 5;
        case EtsKind::holt_winters:
        default:
            return 5 + 1 + (kPeriod - 1) + 1;
    }
}

}  // namespace

const std::vector<double>& smoothing_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g;
        for (int i = 1; i <= 19; ++i) {
            g.push_back(0.05 * i);
        }
        return g;
    }();
    return grid;
}

bool seasonality_test(std::span<const double> values, std::size_t period) {
    if (values.size() <= period + 1) {
        return false;
    }
    const auto r = autocorrelations(values, period);
    if (r[0] == 0.0) {
        return false;
    }
    double acc = 1.0;
    for (std::size_t i = 1; i < period; ++i) {
        acc += 2.0 * r[i] * r[i];
    }
    const double limit = 1.645 * std::sqrt(acc / static_cast<double>(values.size()));
    return std::abs(r[period]) > limit;
}

ThetaState fit_theta(std::span<const double> values) {
    require_length(values, "theta");
    ThetaState s;
    s.season_index.fill(1.0);
    if (seasonality_test(values)) {
        const auto idx = multiplicative_indices(values);
        if (!idx.empty()) {
            s.seasonal = true;
            std::copy(idx.begin(), idx.end(), s.season_index.begin());
        }
    }
    const std::size_t n = values.size();
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = values[t] / s.season_index[t % kPeriod];
    }
    const double tbar = (static_cast<double>(n) - 1.0) / 2.0;
    double xbar = 0.0;
    for (const double v : x) {
        xbar += v;
    }
    xbar /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - tbar;
        sxy += dt * (x[t] - xbar);
        sxx += dt * dt;
    }
    s.slope = sxy / sxx;
    s.intercept = xbar - s.slope * tbar;

    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) {
        z[t] = 2.0 * x[t] - (s.intercept + s.slope * static_cast<double>(t));
    }
    double best_sse = std::numeric_limits<double>::infinity();
    for (const double alpha : smoothing_grid()) {
        double level = z[0];
        double sse = 0.0;
        for (std::size_t t = 1; t < n; ++t) {
            const double e = z[t] - level;
            sse += e * e;
            level = alpha * z[t] + (1.0 - alpha) * level;
        }
        if (sse < best_sse) {
            best_sse = sse;
            s.alpha = alpha;
            s.level = level;
        }
    }
    s.observations = n;
    return s;
}

void theta_update(ThetaState& s, double observation) {
    const std::size_t t = s.observations;
    const double x = observation / s.season_index[t % kPeriod];
    const double z = 2.0 * x - (s.intercept + s.slope * static_cast<double>(t));
    s.level = s.alpha * z + (1.0 - s.alpha) * s.level;
    s.observations += 1;
}

std::vector<double> theta_forecast(const ThetaState& s, std::size_t horizon) {
    std::vector<double> out(horizon);
    for (std::size_t k = 1; k <= horizon; ++k) {
        const std::size_t t = s.observations - 1 + k;
        const double trend = s.intercept + s.slope * static_cast<double>(t);
        out[k - 1] = 0.5 * (trend + s.level) * s.season_index[t % kPeriod];
    }
    return out;
}

std::string to_string(EtsKind kind) {
    switch (kind) {
        case EtsKind::simple:
            return "simple";
        case EtsKind::holt:
            return "holt";
        case EtsKind::holt_winters:
            return "holt_winters";
    }
    return "unknown";
}

std::size_t ets_initialize(EtsState& s, std::span<const double> values) {
    s.season.fill(0.0);
    s.trend = 0.0;
    switch (s.kind) {
        case EtsKind::simple:
            if (values.empty()) {
                throw InvalidArgument("ets: no observations to initialize from");
            }
            s.level = values[0];
            s.observations = 1;
            return 1;
        case EtsKind::holt:
            if (values.size() < 2) {
                throw InvalidArgument("ets holt: needs two observations to initialize");
            }
            s.level = values[1];
            s.trend = values[1] - values[0];
            s.observations = 2;
            return 2;
        case EtsKind::holt_winters: {
            if (values.size() < 2 * kPeriod) {
                throw InvalidArgument("ets holt-winters: needs two seasonal cycles");
            }
            double m1 = 0.0;
            double m2 = 0.0;
            for (std::size_t i = 0; i < kPeriod; ++i) {
                m1 += values[i];
                m2 += values[kPeriod + i];
            }
            m1 /= static_cast<double>(kPeriod);
            m2 /= static_cast<double>(kPeriod);
            s.trend = (m2 - m1) / static_cast<double>(kPeriod);
            const double mid = (static_cast<double>(kPeriod) - 1.0) / 2.0;
            for (std::size_t i = 0; i < kPeriod; ++i) {
                s.season[i] = values[i] - (m1 + (static_cast<double>(i) - mid) * s.trend);
            }
            s.level = m1 + mid * s.trend;
            s.observations = kPeriod;
            return kPeriod;
        }
    }
    return 0;
}

double ets_one_step(const EtsState& s) {
    switch (s.kind) {
        case EtsKind::simple:
            return s.level;
        case EtsKind::holt:
            return s.level + s.trend;
        case EtsKind::holt_winters:
        default:
            return s.level + s.trend + s.season[s.observations % kPeriod];
    }
}

void ets_update(EtsState& s, double y) {
    switch (s.kind) {
        case EtsKind::simple:
            s.level = s.alpha * y + (1.0 - s.alpha) * s.level;
            break;
        case EtsKind::holt: {
            const double prev = s.level;
            s.level = s.alpha * y + (1.0 - s.alpha) * (prev + s.trend);
            s.trend = s.beta * (s.level - prev) + (1.0 - s.beta) * s.trend;
            break;
        }
        case EtsKind::holt_winters: {
            const std::size_t pos = s.observations % kPeriod;
            const double prev_level = s.level;
            const double prev_trend = s.trend;
            const double prev_season = s.season[pos];
            s.level = s.alpha * (y - prev_season) + (1.0 - s.alpha) * (prev_level + prev_trend);
            s.trend = s.beta * (s.level - prev_level) + (1.0 - s.beta) * prev_trend;
            s.season[pos] =
                s.gamma * (y - prev_level - prev_trend) + (1.0 - s.gamma) * prev_season;
            break;
        }
    }
    s.observations += 1;
}

std::vector<double> ets_forecast(const EtsState& s, std::size_t horizon) {
    std::vector<double> out(horizon);
    for (std::size_t k = 1; k <= horizon; ++k) {
        const double kk = static_cast<double>(k);
        switch (s.kind) {
            case EtsKind::simple:
                out[k - 1] = s.level;
                break;
            case EtsKind::holt:
                out[k - 1] = s.level + kk * s.trend;
                break;
            case EtsKind::holt_winters:
                out[k - 1] =
                    s.level + kk * s.trend + s.season[(s.observations + k - 1) % kPeriod];
                break;
        }
    }
    return out;
}

EtsState fit_ets(std::span<const double> values) {
    require_length(values, "ets");
    const std::size_t n = values.size();
    const std::size_t scored = n - kPeriod;
    const auto& grid = smoothing_grid();
    const std::vector<double> unused{0.0};

    EtsState best;
    best.aicc = std::numeric_limits<double>::infinity();
    for (const auto kind : {EtsKind::simple, EtsKind::holt, EtsKind::holt_winters}) {
        const std::size_t k = ets_parameter_count(kind);
        if (scored <= k + 1) {
            continue;
        }
        const auto& betas = kind == EtsKind::simple ? unused : grid;
        const auto& gammas = kind == EtsKind::holt_winters ? grid : unused;
        for (const double alpha : grid) {
            for (const double beta : betas) {
                for (const double gamma : gammas) {
                    EtsState s;
                    s.kind = kind;
                    s.alpha = alpha;
                    s.beta = beta;
                    s.gamma = gamma;
                    const std::size_t start = ets_initialize(s, values);
                    double sse = 0.0;
                    for (std::size_t t = start; t < n; ++t) {
                        if (t >= kPeriod) {
                            const double e = values[t] - ets_one_step(s);
                            sse += e * e;
                        }
                        ets_update(s, values[t]);
                    }
                    s.aicc = aicc(sse, scored, k);
                    if (s.aicc < best.aicc) {
                        best = s;
                    }
                }
            }
        }
    }
    if (!std::isfinite(best.aicc)) {
        throw NumericError("ets: no candidate produced a finite AICc");
    }
    return best;
}

SeasonalNaiveState fit_seasonal_naive(std::span<const double> values) {
    require_length(values, "seasonal_naive");
    SeasonalNaiveState s;
    std::copy(values.end() - kPeriod, values.end(), s.cycle.begin());
    s.observations = values.size();
    return s;
}

void seasonal_naive_update(SeasonalNaiveState& s, double observation) {
    std::rotate(s.cycle.begin(), s.cycle.begin() + 1, s.cycle.end());
    s.cycle.back() = observation;
    s.observations += 1;
}

std::vector<double> seasonal_naive_forecast(const SeasonalNaiveState& s, std::size_t horizon) {
    std::vector<double> out(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        out[k] = s.cycle[k % kPeriod];
    }
    return out;
}

ClassicalModel fit_classical(Family family, std::span<const double> values) {
    ClassicalModel m;
    m.family = family;
    m.fitted_values.assign(values.begin(), values.end());
    switch (family) {
        case Family::theta:
            m.state = fit_theta(values);
            break;
        case Family::ets:
            m.state = fit_ets(values);
            break;
        case Family::seasonal_naive:
            m.state = fit_seasonal_naive(values);
            break;
        default:
            throw InvalidArgument(to_string(family) + " is not a classical family");
    }
    return m;
}

std::vector<double> forecast_classical(const ClassicalModel& model, std::span<const double> history,
                                       std::size_t horizon) {
    if (horizon == 0) {
        throw InvalidArgument("forecast horizon must be positive");
    }
    const auto& fitted = model.fitted_values;
    if (history.size() < fitted.size() ||
        !std::equal(fitted.begin(), fitted.end(), history.begin())) {
        throw InvalidArgument("history does not extend the fitting data contiguously");
    }
    const auto fresh = history.subspan(fitted.size());
    return std::visit(
        [&](auto state) -> std::vector<double> {
            using T = std::decay_t<decltype(state)>;
            if constexpr (std::is_same_v<T, ThetaState>) {
                for (const double y : fresh) {
                    theta_update(state, y);
                }
                return theta_forecast(state, horizon);
            } else if constexpr (std::is_same_v<T, EtsState>) {
                for (const double y : fresh) {
                    ets_update(state, y);
                }
                return ets_forecast(state, horizon);
            } else {
                for (const double y : fresh) {
                    seasonal_naive_update(state, y);
                }
                return seasonal_naive_forecast(state, horizon);
            }
        },
        model.state);
}

}  // namespace tsforge
