#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "tsforge/analysis/features.hpp"
#include "tsforge/common/csv.hpp"
#include "tsforge/common/error.hpp"

namespace tsforge {
namespace {

using test::ar1;
using test::make_ts;
using test::random_walk;
using test::sinusoid;
using test::white_noise;

// Deterministic fixture shared with the reference values below.
std::vector<double> fixture() {
    std::vector<double> x(120);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i);
        x[i] = 0.05 * t + std::sin(2.0 * std::numbers::pi * t / 12.0) + 0.3 * std::sin(0.37 * t * t);
    }
    return x;
}

// Reference values computed with statsmodels / scipy on fixture():
// adfuller(x, maxlag=12, autolag=None, regression="c"), acorr_ljungbox(boxpierce=True, lags=24),
// seasonal_decompose(period=12), scipy.stats.skew / kurtosis.
constexpr double kRefAdfStat = -0.9604227413326851;
constexpr double kRefAdfP = 0.7674242301258141;
constexpr double kRefBoxPierce = 1094.1097262067383;
constexpr double kRefSeason = 0.9354470249934301;
constexpr double kRefSkew = -0.06796649877460521;
constexpr double kRefKurt = -0.9621603812650834;

TEST(SpectralEntropy, NoiseHighSinusoidLow) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        EXPECT_GT(spectral_entropy(white_noise(400, seed)), 0.9) << seed;
    }
    EXPECT_LT(spectral_entropy(sinusoid(240, 5.0, 2.0)), 0.3);
    EXPECT_THROW((void)spectral_entropy(std::vector<double>(48, 1.0)), InvalidArgument);
    EXPECT_THROW((void)spectral_entropy(white_noise(10, 1)), InvalidArgument);
}

TEST(SpectralEntropy, ShiftAndScaleInvariant) {
    const auto x = white_noise(100, 3);
    auto y = x;
    for (auto& v : y) {
        v = 4.0 * v - 17.0;
    }
    EXPECT_NEAR(spectral_entropy(x), spectral_entropy(y), 1e-12);
}

TEST(Decomposition, MatchesHandComputedMovingAverage) {
    const auto x = fixture();
    const auto d = classical_decomposition(x);
    EXPECT_EQ(d.begin, 6u);
    EXPECT_EQ(d.end, 114u);
    const std::size_t t = 40;
    double ma = 0.5 * x[t - 6] + 0.5 * x[t + 6];
    for (std::size_t j = t - 5; j <= t + 5; ++j) {
        ma += x[j];
    }
    ma /= 12.0;
    EXPECT_NEAR(d.trend[t - d.begin], ma, 1e-12);
    double seasonal_sum = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
        seasonal_sum += d.seasonal[i];
    }
    EXPECT_NEAR(seasonal_sum, 0.0, 1e-12);
    for (std::size_t i = 0; i < d.detrended.size(); ++i) {
        EXPECT_NEAR(d.detrended[i], d.seasonal[i] + d.remainder[i], 1e-12);
    }
}

TEST(SeasonalStrength, ReferenceAndExtremes) {
    EXPECT_NEAR(seasonal_strength(fixture()), kRefSeason, 1e-9);
    auto s = sinusoid(120, 10.0, 3.0);
    const auto noise = white_noise(120, 9, 0.0, 0.01);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] += noise[i];
    }
    EXPECT_GT(seasonal_strength(s), 0.99);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        EXPECT_LT(seasonal_strength(white_noise(240, seed)), 0.3) << seed;
    }
    auto trend = sinusoid(120, 10.0, 3.0);
    for (std::size_t t = 0; t < trend.size(); ++t) {
        trend[t] += 0.4 * static_cast<double>(t);
    }
    EXPECT_GT(seasonal_strength(trend), 0.99);
    EXPECT_EQ(seasonal_strength(std::vector<double>(48, 2.0)), 0.0);
    EXPECT_THROW((void)seasonal_strength(white_noise(20, 1)), InvalidArgument);
}

TEST(Moments, ReferenceValues) {
    const auto m = skewness_kurtosis(fixture());
    EXPECT_NEAR(m.skewness, kRefSkew, 1e-10);
    EXPECT_NEAR(m.kurtosis, kRefKurt, 1e-10);
    const auto sym = skewness_kurtosis(std::vector<double>{-2, -1, 0, 1, 2});
    EXPECT_NEAR(sym.skewness, 0.0, 1e-15);
    // Population moments: m2 = 2, m4 = 6.8.
    EXPECT_NEAR(sym.kurtosis, 6.8 / 4.0 - 3.0, 1e-12);
    // [0, 0, 0, 1]: m2 = 3/16, m3 = 3/32, g1 = 2 / sqrt(3).
    EXPECT_NEAR(skewness_kurtosis(std::vector<double>{0, 0, 0, 1}).skewness, 2.0 / std::sqrt(3.0),
                1e-12);
    EXPECT_LT(std::abs(skewness_kurtosis(white_noise(10000, 8)).kurtosis), 0.2);
    EXPECT_THROW((void)skewness_kurtosis(std::vector<double>(10, 3.0)), InvalidArgument);
}

TEST(BoxPierce, ReferenceAndAutocorrelatedSeries) {
    EXPECT_NEAR(box_pierce(fixture()), kRefBoxPierce, 1e-8);
    EXPECT_GT(box_pierce(ar1(240, 0.9, 5)), 200.0);
    // 99th percentile of chi-square with 24 degrees of freedom.
    int below = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        below += box_pierce(white_noise(500, seed)) < 42.980 ? 1 : 0;
    }
    EXPECT_GE(below, 18);
    std::vector<double> alternating(60);
    for (std::size_t t = 0; t < alternating.size(); ++t) {
        alternating[t] = t % 2 == 0 ? 1.0 : -1.0;
    }
    EXPECT_GE(box_pierce(alternating), 60.0);
    EXPECT_THROW((void)box_pierce(white_noise(20, 1)), InvalidArgument);
    EXPECT_THROW((void)box_pierce(white_noise(50, 1), 0), InvalidArgument);
}

// n R^2 of regressing the linear-AR(2) residuals on the cubic expansion, via normal equations.
double terasvirta_oracle(const std::vector<double>& values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    const Eigen::Map<const Eigen::VectorXd> v(values.data(), n);
    const double mean = v.mean();
    const double sd = std::sqrt((v.array() - mean).square().mean());
    const Eigen::VectorXd z = (v.array() - mean) / sd;
    const Eigen::Index rows = n - 2;
    Eigen::MatrixXd x0(rows, 3);
    Eigen::MatrixXd x1(rows, 10);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double a = z(r + 1);
        const double b = z(r);
        y(r) = z(r + 2);
        x0.row(r) << 1, a, b;
        x1.row(r) << 1, a, b, a * a, a * b, b * b, a * a * a, a * a * b, a * b * b, b * b * b;
    }
    const Eigen::VectorXd e0 = y - x0 * (x0.transpose() * x0).ldlt().solve(x0.transpose() * y);
    const Eigen::VectorXd e1 = e0 - x1 * (x1.transpose() * x1).ldlt().solve(x1.transpose() * e0);
    return static_cast<double>(rows) * (1.0 - e1.squaredNorm() / e0.squaredNorm());
}

TEST(Terasvirta, MatchesNormalEquationOracle) {
    for (const auto& x : {fixture(), white_noise(150, 4), ar1(200, 0.6, 7)}) {
        EXPECT_NEAR(terasvirta_nonlinearity(x), terasvirta_oracle(x), 1e-6);
    }
}

TEST(Terasvirta, NonlinearMapScoresHigh) {
    // Logistic map in its chaotic regime is a deterministic quadratic of its lag.
    std::vector<double> x(200);
    x[0] = 0.3;
    for (std::size_t t = 1; t < x.size(); ++t) {
        x[t] = 3.9 * x[t - 1] * (1.0 - x[t - 1]);
    }
    // Far beyond the 99th percentile of chi-square with 7 degrees of freedom (18.48).
    EXPECT_GT(terasvirta_nonlinearity(x), 100.0);
    EXPECT_LT(terasvirta_nonlinearity(ar1(200, 0.5, 3)), 30.0);
    std::vector<double> line(60);
    for (std::size_t t = 0; t < line.size(); ++t) {
        line[t] = 2.0 + 0.5 * static_cast<double>(t);
    }
    EXPECT_EQ(terasvirta_nonlinearity(line), 0.0);
    std::vector<double> ar_exact(60);
    ar_exact[0] = 1.0;
    for (std::size_t t = 1; t < ar_exact.size(); ++t) {
        ar_exact[t] = 0.8 * ar_exact[t - 1] + 0.3;
    }
    EXPECT_LT(terasvirta_nonlinearity(ar_exact), 1e-6);
}

TEST(Terasvirta, AffineInvariance) {
    const auto x = ar1(150, 0.4, 13);
    auto y = x;
    for (auto& v : y) {
        v = -250.0 * v + 1e4;
    }
    EXPECT_NEAR(terasvirta_nonlinearity(x), terasvirta_nonlinearity(y), 1e-6);
}

TEST(Adf, MatchesReferenceImplementation) {
    const auto r = adf_test(fixture());
    EXPECT_EQ(r.lags, 12u);
    EXPECT_EQ(r.observations, 107u);
    EXPECT_NEAR(r.statistic, kRefAdfStat, 1e-8);
    EXPECT_NEAR(r.p_value, kRefAdfP, 1e-6);
}

TEST(Adf, MacKinnonReferencePoints) {
    EXPECT_NEAR(mackinnon_pvalue(-4.0), 0.0014105112530392603, 1e-9);
    EXPECT_NEAR(mackinnon_pvalue(-2.5), 0.11547432475870761, 1e-9);
    EXPECT_NEAR(mackinnon_pvalue(-1.0), 0.7532643012005655, 1e-9);
    EXPECT_NEAR(mackinnon_pvalue(0.5), 0.9848730963065522, 1e-9);
    EXPECT_NEAR(mackinnon_pvalue(-1.61), 0.4779756525941893, 1e-9);
    EXPECT_EQ(mackinnon_pvalue(-40.0), 0.001);
    EXPECT_EQ(mackinnon_pvalue(10.0), 0.999);
    double prev = 0.0;
    for (double tau = -20.0; tau <= 3.0; tau += 0.01) {
        const double p = mackinnon_pvalue(tau);
        EXPECT_GE(p, prev);
        prev = p;
    }
}

TEST(Adf, StationaryVersusUnitRoot) {
    int walk_high = 0;
    int noise_low = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        walk_high += adf_pvalue(random_walk(500, seed)) > 0.10 ? 1 : 0;
        noise_low += adf_pvalue(white_noise(500, 100 + seed)) < 0.01 ? 1 : 0;
    }
    EXPECT_GE(walk_high, 18);
    EXPECT_GE(noise_low, 18);
    EXPECT_THROW((void)adf_test(white_noise(20, 1)), InvalidArgument);
}

TEST(Outliers, SpikesRaiseTheProportion) {
    auto base = sinusoid(144, 20.0, 4.0);
    const auto noise = white_noise(144, 21);
    for (std::size_t i = 0; i < base.size(); ++i) {
        base[i] += noise[i];
    }
    const double clean = outlier_proportion(base);
    EXPECT_LT(clean, 0.05);
    auto spiked = base;
    for (const std::size_t i : {30u, 70u, 110u}) {
        spiked[i] += 40.0;
    }
    EXPECT_GE(outlier_proportion(spiked), clean + 3.0 / 144.0);
    EXPECT_EQ(outlier_proportion(sinusoid(96, 3.0, 1.0)), 0.0);
    auto one = sinusoid(120, 50.0, 5.0);
    const auto small = white_noise(120, 3, 0.0, 0.1);
    for (std::size_t i = 0; i < one.size(); ++i) {
        one[i] += small[i];
    }
    one[60] += 10.0 * 0.1;
    EXPECT_DOUBLE_EQ(outlier_proportion(one), 1.0 / 120.0);
}

TEST(FeatureVector, ComputesAllOrReportsEveryFailure) {
    const auto ok = compute_feature_vector(make_ts("X", fixture()));
    ASSERT_TRUE(ok.features.has_value());
    EXPECT_TRUE(ok.failures.empty());
    EXPECT_NEAR(ok.features->stationarity, kRefAdfP, 1e-6);
    EXPECT_NEAR(ok.features->white_noise, kRefBoxPierce, 1e-8);
    const auto a = ok.features->to_array();
    EXPECT_EQ(FeatureVector::from_array(a).to_array(), a);

    const auto flat = compute_feature_vector(make_ts("F", std::vector<double>(60, 2.0)));
    EXPECT_FALSE(flat.features.has_value());
    ASSERT_FALSE(flat.failures.empty());
    bool saw_entropy = false;
    for (const auto& f : flat.failures) {
        saw_entropy = saw_entropy || f.feature == "entropy";
        EXPECT_FALSE(f.message.empty());
    }
    EXPECT_TRUE(saw_entropy);
}

TEST(Standardize, ZScoresAndIdempotence) {
    const std::vector<std::vector<double>> m{{1, 10}, {2, 30}, {3, 20}, {6, 0}};
    const auto s = standardize_features(m);
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0.0;
        double var = 0.0;
        for (const auto& row : s.values) {
            mean += row[j] / 4.0;
        }
        for (const auto& row : s.values) {
            var += (row[j] - mean) * (row[j] - mean) / 4.0;
        }
        EXPECT_NEAR(mean, 0.0, 1e-12);
        EXPECT_NEAR(var, 1.0, 1e-12);
    }
    EXPECT_DOUBLE_EQ(s.mean[0], 3.0);
    EXPECT_DOUBLE_EQ(s.sd[0], std::sqrt(3.5));
    const auto twice = standardize_features(s.values);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_NEAR(twice.values[i][j], s.values[i][j], 1e-9);
        }
    }
    const std::vector<std::string> names{"a", "b"};
    try {
        (void)standardize_features({{1, 5}, {2, 5}}, names);
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
    }
}

TEST(FeaturesCsv, HeaderAndRoundTrip) {
    const test::TempDir dir("features");
    const auto fv = compute_feature_vector(make_ts("X", fixture())).features.value();
    const std::vector<std::string> ids{"X"};
    const std::vector<FeatureVector> rows{fv};
    write_features_csv(dir.path() / "f.csv", ids, rows);
    const auto read = csv::read_file(dir.path() / "f.csv");
    ASSERT_EQ(read.size(), 2u);
    EXPECT_EQ(read[0][0], "series_id");
    EXPECT_EQ(read[0][8], "stationarity");
    double v = 0.0;
    ASSERT_TRUE(csv::parse_double(read[1][6], v));
    EXPECT_EQ(v, fv.white_noise);
}

}  // namespace
}  // namespace tsforge
