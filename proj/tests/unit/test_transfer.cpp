#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/synthetic.hpp"
#include "tsforge/transfer/transfer.hpp"

namespace tsforge {
namespace {

ForecasterConfig small(Family family) {
    ForecasterConfig c;
    c.family = family;
    c.input_size = 12;
    c.horizon = 3;
    c.lstm.units = 6;
    c.tcn.filters = 4;
    c.tcn.kernel = 3;
    c.cnn.filters = {4, 4};
    c.cnn.kernels = {3, 2};
    return c;
}

EarlyStopPolicy quick() {
    EarlyStopPolicy p;
    p.max_epochs = 2;
    p.patience = 2;
    return p;
}

TEST(SourceCorpus, PoolsPerSeriesScaledWindows) {
    auto corpus_series = synthetic::make_corpus(4, 80, 5);
    corpus_series.push_back(test::make_ts("short", std::vector<double>(30, 1.0)));
    const auto corpus = assemble_source_corpus(corpus_series, 4, 3);
    EXPECT_EQ(corpus.series_ids.size(), 4u);
    ASSERT_EQ(corpus.skipped.size(), 1u);
    EXPECT_EQ(corpus.skipped[0].id, "short");
    // 80 points: train [0, 44), windows at origins 4..41 -> 38 rows per series.
    EXPECT_EQ(corpus.train.size(), 4u * 38u);
    // validation [44, 62) -> 16 rows per series.
    EXPECT_EQ(corpus.validation.size(), 4u * 16u);
    for (std::size_t r = 0; r < 38; ++r) {
        for (const double v : corpus.train.input(r)) {
            EXPECT_GE(v, 0.1 - 1e-12);
            EXPECT_LE(v, 1.1 + 1e-12);
        }
    }
    const auto& s0 = corpus_series[0].values;
    EXPECT_DOUBLE_EQ(corpus.train.input(0)[0],
                     (s0[0] - corpus.scalers[0].min) / (corpus.scalers[0].max - corpus.scalers[0].min) +
                         0.1);
}

TEST(SourceCorpus, EmptyOrAllSkippedThrows) {
    EXPECT_THROW((void)assemble_source_corpus({}, 4, 3), InvalidArgument);
    const std::vector<TimeSeries> bad{test::make_ts("c", std::vector<double>(100, 3.0))};
    EXPECT_THROW((void)assemble_source_corpus(bad, 4, 3), InvalidArgument);
    EXPECT_EQ(parse_corpus_id("set_B_M3_like"), CorpusId::set_B_M3_like);
    EXPECT_EQ(to_string(CorpusId::synthetic), "synthetic");
    EXPECT_THROW((void)parse_corpus_id("m5"), InvalidArgument);
}

TEST(Pretrain, MismatchedWindowsRejected) {
    const auto corpus = assemble_source_corpus(synthetic::make_corpus(2, 80, 1), 4, 3);
    EXPECT_THROW((void)pretrain_global(corpus, small(Family::tcn), 1, quick(), GridPolicy::relaxed),
                 InvalidArgument);
}

class FreezeTest : public ::testing::TestWithParam<Family> {};

TEST_P(FreezeTest, OnlyHeadChangesDuringFineTune) {
    const auto corpus = assemble_source_corpus(synthetic::make_corpus(3, 90, 2), 12, 3);
    const auto global =
        pretrain_global(corpus, small(GetParam()), 7, quick(), GridPolicy::relaxed);
    const auto target = synthetic::make_corpus(1, 90, 99, "T")[0];
    FineTunePolicy policy;
    policy.learning_rate = GetParam() == Family::cnn ? 5e-5 : 5e-4;
    policy.max_epochs = 5;
    const auto tuned = fine_tune_target(global, target, policy, 11);
    const auto& before = global.forecaster.neural_state().network.parameters();
    const auto& after = tuned.neural_state().network.parameters();
    ASSERT_EQ(before.names(), after.names());
    for (const auto& name : before.names()) {
        if (name.rfind("head.", 0) == 0) {
            continue;
        }
        EXPECT_TRUE(after.value(name).bit_identical(before.value(name))) << name;
    }
    EXPECT_EQ(after.trainable_names(), (std::vector<std::string>{"head.bias", "head.weight"}));
    const auto split = split_series(target);
    const auto expected = fit_scaler(std::span<const double>(target.values).first(split.train.end));
    EXPECT_EQ(tuned.neural_state().scaler, expected);
}

INSTANTIATE_TEST_SUITE_P(Families, FreezeTest,
                         ::testing::Values(Family::cnn, Family::lstm, Family::tcn),
                         [](const auto& info) { return to_string(info.param); });

TEST(FineTune, GlobalModelIsNotModified) {
    const auto corpus = assemble_source_corpus(synthetic::make_corpus(2, 90, 3), 12, 3);
    const auto global = pretrain_global(corpus, small(Family::tcn), 5, quick(), GridPolicy::relaxed);
    const auto snapshot = global.forecaster.neural_state().network.parameters();
    const auto target = synthetic::make_corpus(1, 90, 4, "T")[0];
    FineTunePolicy policy;
    policy.learning_rate = 1e-4;
    policy.max_epochs = 3;
    (void)fine_tune_target(global, target, policy, 1);
    EXPECT_TRUE(global.forecaster.neural_state().network.parameters().bit_identical(snapshot));
}

TEST(FineTune, LearningRateMustBeBelowPretraining) {
    const auto corpus = assemble_source_corpus(synthetic::make_corpus(2, 90, 3), 12, 3);
    const auto global = pretrain_global(corpus, small(Family::tcn), 5, quick(), GridPolicy::relaxed);
    const auto target = synthetic::make_corpus(1, 90, 4, "T")[0];
    FineTunePolicy policy;
    policy.learning_rate = 1e-3;
    EXPECT_THROW((void)fine_tune_target(global, target, policy, 1), InvalidArgument);
    policy.learning_rate = 0.0;
    EXPECT_THROW((void)fine_tune_target(global, target, policy, 1), InvalidArgument);
    policy.learning_rate = 1e-5;
    const auto shortie = test::make_ts("x", std::vector<double>(40, 1.0));
    EXPECT_THROW((void)fine_tune_target(global, shortie, policy, 1), InvalidArgument);
}

TEST(FineTune, DeterministicForSameSeed) {
    const auto corpus = assemble_source_corpus(synthetic::make_corpus(2, 90, 3), 12, 3);
    const auto global = pretrain_global(corpus, small(Family::lstm), 5, quick(), GridPolicy::relaxed);
    const auto target = synthetic::make_corpus(1, 90, 4, "T")[0];
    FineTunePolicy policy;
    policy.learning_rate = 1e-4;
    policy.max_epochs = 3;
    const auto a = fine_tune_target(global, target, policy, 1);
    const auto b = fine_tune_target(global, target, policy, 1);
    EXPECT_TRUE(a.neural_state().network.parameters().bit_identical(
        b.neural_state().network.parameters()));
}

}  // namespace
}  // namespace tsforge
