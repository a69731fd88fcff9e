#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/forecasters/classical.hpp"
#include "tsforge/forecasters/forecaster.hpp"

namespace tsforge {
namespace {

// Plain-loop theta method for series that fail the seasonality test.
std::vector<double> reference_theta(const std::vector<double>& y, std::size_t h) {
    const std::size_t n = y.size();
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t t = 0; t < n; ++t) {
        st += t;
        sy += y[t];
        stt += double(t) * t;
        sty += double(t) * y[t];
    }
    const double b = (n * sty - st * sy) / (n * stt - st * st);
    const double a = (sy - b * st) / n;
    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) {
        z[t] = 2 * y[t] - (a + b * t);
    }
    double best = std::numeric_limits<double>::infinity();
    double best_level = 0;
    for (int i = 1; i <= 19; ++i) {
        const double alpha = 0.05 * i;
        double level = z[0];
        double sse = 0;
        for (std::size_t t = 1; t < n; ++t) {
            sse += (z[t] - level) * (z[t] - level);
            level = alpha * z[t] + (1 - alpha) * level;
        }
        if (sse < best) {
            best = sse;
            best_level = level;
        }
    }
    std::vector<double> f(h);
    for (std::size_t k = 1; k <= h; ++k) {
        f[k - 1] = 0.5 * (a + b * double(n - 1 + k) + best_level);
    }
    return f;
}

std::vector<double> linear(std::size_t n, double a, double b) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        v[t] = a + b * static_cast<double>(t);
    }
    return v;
}

TEST(SmoothingGrid, NineteenStepsOfFivePercent) {
    const auto& g = smoothing_grid();
    ASSERT_EQ(g.size(), 19u);
    EXPECT_DOUBLE_EQ(g.front(), 0.05);
    EXPECT_DOUBLE_EQ(g.back(), 0.95);
}

TEST(SeasonalityTest, DetectsSinusoidNotNoise) {
    EXPECT_TRUE(seasonality_test(test::sinusoid(72, 100.0, 10.0)));
    int fired = 0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        fired += seasonality_test(test::white_noise(72, s, 100.0, 5.0)) ? 1 : 0;
    }
    EXPECT_LE(fired, 4);
}

TEST(Theta, MatchesReferenceOnNonSeasonalSeries) {
    auto y = test::white_noise(60, 3, 50.0, 2.0);
    for (std::size_t t = 0; t < y.size(); ++t) {
        y[t] += 0.3 * static_cast<double>(t);
    }
    ASSERT_FALSE(seasonality_test(y));
    const auto s = fit_theta(y);
    EXPECT_FALSE(s.seasonal);
    const auto f = theta_forecast(s, 6);
    const auto ref = reference_theta(y, 6);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_NEAR(f[k], ref[k], 1e-9);
    }
}

TEST(Theta, UpdateEqualsRefitConditioning) {
    auto y = test::white_noise(61, 4, 80.0, 3.0);
    const std::vector<double> head(y.begin(), y.end() - 1);
    auto s = fit_theta(head);
    theta_update(s, y.back());
    // SES recursion on the theta line continued by hand.
    auto s0 = fit_theta(head);
    const double z = 2.0 * y.back() - (s0.intercept + s0.slope * 60.0);
    EXPECT_NEAR(s.level, s0.alpha * z + (1 - s0.alpha) * s0.level, 1e-12);
    EXPECT_EQ(s.observations, 61u);
}

TEST(Theta, MultiplicativeSeasonalSeriesIsTrackedClosely) {
    std::vector<double> y(96);
    for (std::size_t t = 0; t < y.size(); ++t) {
        y[t] = (200.0 + 1.5 * t) * (1.0 + 0.2 * std::sin(2.0 * M_PI * t / 12.0));
    }
    const auto s = fit_theta(std::span<const double>(y).first(84));
    EXPECT_TRUE(s.seasonal);
    double mean_idx = 0.0;
    for (const double v : s.season_index) {
        mean_idx += v / 12.0;
    }
    EXPECT_NEAR(mean_idx, 1.0, 1e-12);
    const auto f = theta_forecast(s, 12);
    for (std::size_t k = 0; k < 12; ++k) {
        EXPECT_LT(std::abs(f[k] - y[84 + k]) / y[84 + k], 0.03);
    }
}

TEST(Theta, NonPositiveDataSkipsDecomposition) {
    auto y = test::sinusoid(72, 0.0, 10.0);
    const auto s = fit_theta(y);
    EXPECT_FALSE(s.seasonal);
    for (const double v : s.season_index) {
        EXPECT_EQ(v, 1.0);
    }
}

TEST(Ets, ConstantSeriesKeepsSimpleAndForecastsConstant) {
    const std::vector<double> y(48, 7.0);
    const auto s = fit_ets(y);
    EXPECT_EQ(s.kind, EtsKind::simple);
    for (const double f : ets_forecast(s, 5)) {
        EXPECT_DOUBLE_EQ(f, 7.0);
    }
}

TEST(Ets, ExactLineSelectsHolt) {
    const auto y = linear(48, 10.0, 2.0);
    const auto s = fit_ets(y);
    EXPECT_EQ(s.kind, EtsKind::holt);
    const auto f = ets_forecast(s, 3);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(f[k], 10.0 + 2.0 * (48 + k), 1e-9);
    }
}

TEST(Ets, ExactAdditiveSeasonSelectsHoltWinters) {
    const auto y = test::sinusoid(60, 100.0, 10.0);
    const auto s = fit_ets(y);
    EXPECT_EQ(s.kind, EtsKind::holt_winters);
    const auto f = ets_forecast(s, 12);
    const auto cont = test::sinusoid(72, 100.0, 10.0);
    for (std::size_t k = 0; k < 12; ++k) {
        EXPECT_NEAR(f[k], cont[60 + k], 1e-8);
    }
}

TEST(Ets, InitializationConsumesPerKind) {
    const auto y = linear(30, 1.0, 1.0);
    EtsState s;
    s.kind = EtsKind::simple;
    EXPECT_EQ(ets_initialize(s, y), 1u);
    EXPECT_EQ(s.level, 1.0);
    s.kind = EtsKind::holt;
    EXPECT_EQ(ets_initialize(s, y), 2u);
    EXPECT_EQ(s.level, 2.0);
    EXPECT_EQ(s.trend, 1.0);
    s.kind = EtsKind::holt_winters;
    EXPECT_EQ(ets_initialize(s, y), 12u);
    EXPECT_DOUBLE_EQ(s.trend, 1.0);
    EXPECT_DOUBLE_EQ(s.level, 12.0);  // y at the last initialization point
    for (const double v : s.season) {
        EXPECT_NEAR(v, 0.0, 1e-12);
    }
    EXPECT_EQ(to_string(EtsKind::holt_winters), "holt_winters");
}

TEST(Ets, HoltRecursionByHand) {
    EtsState s;
    s.kind = EtsKind::holt;
    s.alpha = 0.3;
    s.beta = 0.2;
    s.level = 10.0;
    s.trend = 1.0;
    s.observations = 2;
    EXPECT_EQ(ets_one_step(s), 11.0);
    ets_update(s, 12.0);
    const double level = 0.3 * 12.0 + 0.7 * 11.0;
    EXPECT_DOUBLE_EQ(s.level, level);
    EXPECT_DOUBLE_EQ(s.trend, 0.2 * (level - 10.0) + 0.8 * 1.0);
}

TEST(SeasonalNaive, ExactCycleIsRepeated) {
    const auto y = test::sinusoid(48, 50.0, 5.0);
    const auto s = fit_seasonal_naive(y);
    const auto f = seasonal_naive_forecast(s, 12);
    for (std::size_t k = 0; k < 12; ++k) {
        EXPECT_EQ(f[k], y[36 + k]);
    }
    auto s2 = s;
    seasonal_naive_update(s2, 999.0);
    EXPECT_EQ(seasonal_naive_forecast(s2, 12)[11], 999.0);
    EXPECT_EQ(seasonal_naive_forecast(s2, 1)[0], y[37]);
    const auto f15 = seasonal_naive_forecast(s, 15);
    EXPECT_EQ(f15[12], y[36]);
}

TEST(Classical, ShortAndNonFiniteInputsRejected) {
    const std::vector<double> y(23, 1.0);
    for (const auto fam : {Family::theta, Family::ets, Family::seasonal_naive}) {
        EXPECT_THROW((void)fit_classical(fam, y), InvalidArgument);
    }
    std::vector<double> z(30, 1.0);
    z[4] = std::nan("");
    EXPECT_THROW((void)fit_classical(Family::theta, z), NumericError);
    EXPECT_THROW((void)fit_classical(Family::tcn, std::vector<double>(30, 1.0)), InvalidArgument);
}

TEST(Classical, ForecastAdvancesStateWithoutRefit) {
    const auto y = test::white_noise(70, 9, 100.0, 4.0);
    const auto m = fit_classical(Family::ets, std::span<const double>(y).first(60));
    auto state = std::get<EtsState>(m.state);
    for (std::size_t t = 60; t < 66; ++t) {
        ets_update(state, y[t]);
    }
    EXPECT_EQ(forecast_classical(m, std::span<const double>(y).first(66), 3),
              ets_forecast(state, 3));
    auto bad = y;
    bad[3] += 1.0;
    EXPECT_THROW((void)forecast_classical(m, std::span<const double>(bad).first(66), 3),
                 InvalidArgument);
    EXPECT_THROW((void)forecast_classical(m, std::span<const double>(y).first(50), 3),
                 InvalidArgument);
}

TEST(Classical, ForecasterWrapperUsesHistoryPrefix) {
    const auto y = test::sinusoid(80, 40.0, 8.0);
    const auto f = fit_classical_forecaster(Family::seasonal_naive,
                                            std::span<const double>(y).first(50), 3);
    EXPECT_FALSE(f.neural());
    const auto p = f.forecast_at(y, 62);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(p[k], y[50 + k]);  // same month one cycle earlier
    }
}

}  // namespace
}  // namespace tsforge
