#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "test_support.hpp"
#include "tsforge/common/csv.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/common/hash.hpp"
#include "tsforge/common/rng.hpp"

namespace tsforge {
namespace {

TEST(Rng, MatchesReferenceSplitMix64Stream) {
    Rng rng(1234567);
    EXPECT_EQ(rng.next_u64(), 6457827717110365317ULL);
    EXPECT_EQ(rng.next_u64(), 3203168211198807973ULL);
    EXPECT_EQ(rng.next_u64(), 9817491932198370423ULL);
    EXPECT_EQ(rng.next_u64(), 4593380528125082431ULL);
    EXPECT_EQ(rng.next_u64(), 16408922859458223821ULL);
}

TEST(Rng, UniformStaysInUnitInterval) {
    Rng rng(7);
    double lo = 1.0;
    double hi = 0.0;
    double sum = 0.0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_LT(lo, 1e-3);
    EXPECT_GT(hi, 1.0 - 1e-3);
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Rng, NormalMomentsAreStandard) {
    Rng rng(11);
    constexpr int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, BelowCoversRangeWithoutOverflow) {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
    EXPECT_EQ(rng.below(0), 0u);
    EXPECT_EQ(rng.below(1), 0u);
}

TEST(Rng, ShuffledIndicesIsAPermutationAndSeeded) {
    const auto a = shuffled_indices(50, 9);
    const auto b = shuffled_indices(50, 9);
    const auto c = shuffled_indices(50, 10);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        EXPECT_EQ(sorted[i], i);
    }
}

TEST(DeriveSeed, DeterministicAndSensitiveToEveryField) {
    const auto base = derive_seed(42, "N1", "tcn", 12, 3);
    EXPECT_EQ(base, derive_seed(42, "N1", "tcn", 12, 3));
    std::set<std::uint64_t> variants{base,
                                     derive_seed(43, "N1", "tcn", 12, 3),
                                     derive_seed(42, "N2", "tcn", 12, 3),
                                     derive_seed(42, "N1", "lstm", 12, 3),
                                     derive_seed(42, "N1", "tcn", 4, 3),
                                     derive_seed(42, "N1", "tcn", 12, 6),
                                     derive_seed(42, "N1t", "cn", 12, 3)};
    EXPECT_EQ(variants.size(), 7u);
    EXPECT_NE(derive_seed(5, 0), derive_seed(5, 1));
    EXPECT_EQ(derive_seed(5, 1), derive_seed(5, 1));
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, FileMatchesBytes) {
    test::TempDir dir("sha");
    const auto p = dir.path() / "x.txt";
    write_text_file(p, "abc");
    EXPECT_EQ(sha256_file(p), sha256_hex("abc"));
    EXPECT_EQ(read_text_file(p), "abc");
    EXPECT_THROW((void)read_text_file(dir.path() / "missing"), Error);
}

TEST(Csv, SplitHandlesQuotesAndEmptyFields) {
    const auto r = csv::split_line("a,\"b,c\",,\"d\"\"e\"\r");
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0], "a");
    EXPECT_EQ(r[1], "b,c");
    EXPECT_EQ(r[2], "");
    EXPECT_EQ(r[3], "d\"e");
}

TEST(Csv, JoinSplitRoundTrip) {
    const csv::Row row{"plain", "with,comma", "with\"quote", ""};
    EXPECT_EQ(csv::split_line(csv::join(row)), row);
}

TEST(Csv, DoubleFormattingRoundTripsBitExactly) {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.normal() * std::pow(10.0, rng.uniform(-20.0, 20.0));
        double y = 0.0;
        ASSERT_TRUE(csv::parse_double(csv::format_double(x), y));
        EXPECT_EQ(x, y);
    }
}

TEST(Csv, ParseDoubleRejectsTrailingGarbage) {
    double v = 0.0;
    EXPECT_FALSE(csv::parse_double("1.5x", v));
    EXPECT_FALSE(csv::parse_double("", v));
    EXPECT_FALSE(csv::parse_double("abc", v));
    EXPECT_TRUE(csv::parse_double(" 2.25 ", v));
    EXPECT_EQ(v, 2.25);
}

TEST(Csv, ReadFileDropsBomAndBlankLines) {
    test::TempDir dir("csv");
    const auto p = dir.path() / "f.csv";
    {
        std::ofstream out(p, std::ios::binary);
        out << "\xEF\xBB\xBFh1,h2\n\n1,2\n";
    }
    const auto rows = csv::read_file(p);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "h1");
    EXPECT_EQ(rows[1][1], "2");
}

TEST(Csv, WriteFileThenRead) {
    test::TempDir dir("csvw");
    const auto p = dir.path() / "sub" / "o.csv";
    csv::write_file(p, {"a", "b"}, {{"1", "x,y"}});
    const auto rows = csv::read_file(p);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][1], "x,y");
}

}  // namespace
}  // namespace tsforge
