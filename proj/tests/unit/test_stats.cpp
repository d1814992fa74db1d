#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <tres/stats.hpp>

using namespace tres;

namespace {

/// Two-sided p of the rank sum by enumerating every split of the pooled sample.
double permutation_rank_sum_p(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> pooled = x;
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto ranks = mid_ranks(pooled);
    const int n = static_cast<int>(pooled.size());
    const int k = static_cast<int>(x.size());
    const double expected = k * (n + 1) / 2.0;
    const double observed = std::accumulate(ranks.begin(), ranks.begin() + k, 0.0);
    long hit = 0, all = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k)
            continue;
        double s = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u)
                s += ranks[i];
        ++all;
        hit += std::abs(s - expected) >= std::abs(observed - expected) - 1e-9;
    }
    return static_cast<double>(hit) / static_cast<double>(all);
}

double sign_flip_p(const std::vector<double>& x)
{
    std::vector<double> nz;
    for (double v : x)
        if (v != 0)
            nz.push_back(v);
    std::vector<double> mag;
    for (double v : nz)
        mag.push_back(std::abs(v));
    const auto ranks = mid_ranks(mag);
    const int n = static_cast<int>(nz.size());
    const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
    double observed = 0;
    for (int i = 0; i < n; ++i)
        if (nz[i] > 0)
            observed += ranks[i];
    long hit = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double s = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u)
                s += ranks[i];
        hit += std::abs(2 * s - total) >= std::abs(2 * observed - total) - 1e-9;
    }
    return static_cast<double>(hit) / static_cast<double>(1u << n);
}

std::vector<double> draw(std::mt19937_64& rng, int n, int levels)
{
    std::uniform_int_distribution<int> u(0, levels - 1);
    std::vector<double> v(n);
    for (auto& x : v)
        x = 0.1 * u(rng);
    return v;
}

} // namespace

TEST(MidRanks, TiesShareTheMean)
{
    EXPECT_EQ(mid_ranks({3, 1, 2}), (std::vector<double>{3, 1, 2}));
    EXPECT_EQ(mid_ranks({5, 5, 1, 5}), (std::vector<double>{3, 3, 1, 3}));
    EXPECT_EQ(mid_ranks({2, 2}), (std::vector<double>{1.5, 1.5}));
}

TEST(RankSum, SeparatedTriplesGiveOneTenth)
{
    // 2 of the C(6,3) = 20 splits are as extreme
    EXPECT_EQ(wilcoxon_rank_sum({1, 2, 3}, {4, 5, 6}), 0.1);
    EXPECT_EQ(wilcoxon_rank_sum({4, 5, 6}, {1, 2, 3}), 0.1);
}

TEST(RankSum, IdenticalSamplesGiveOne)
{
    EXPECT_EQ(wilcoxon_rank_sum({0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}), 1.0);
    const std::vector<double> v = {0.1, 0.5, 0.2, 0.9, 0.4};
    EXPECT_EQ(wilcoxon_rank_sum(v, v), 1.0);
    std::vector<double> big(15, 1.0);
    EXPECT_EQ(wilcoxon_rank_sum(big, big), 1.0);
}

TEST(RankSum, MatchesPermutationOracle)
{
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const int nx = 1 + trial % 7, ny = 1 + (trial / 7) % 7;
        const auto x = draw(rng, nx, trial % 2 ? 5 : 1000);
        const auto y = draw(rng, ny, trial % 2 ? 5 : 1000);
        EXPECT_NEAR(wilcoxon_rank_sum(x, y), permutation_rank_sum_p(x, y), 1e-9) << "trial " << trial;
    }
}

TEST(RankSum, SymmetricAndRankInvariant)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = draw(rng, 5, 50), y = draw(rng, 6, 50);
        const double p = wilcoxon_rank_sum(x, y);
        EXPECT_DOUBLE_EQ(p, wilcoxon_rank_sum(y, x));
        auto fx = x, fy = y;
        for (auto& v : fx)
            v = std::exp(3 * v) - 7;
        for (auto& v : fy)
            v = std::exp(3 * v) - 7;
        EXPECT_DOUBLE_EQ(p, wilcoxon_rank_sum(fx, fy));
    }
}

TEST(RankSum, NormalApproximationNearExactAtCrossover)
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(10), y(11);
        for (auto& v : x)
            v = n(rng) + 0.8;
        for (auto& v : y)
            v = n(rng);
        ASSERT_GT(x.size() + y.size(), kExactRankSumLimit);
        EXPECT_NEAR(wilcoxon_rank_sum(x, y), permutation_rank_sum_p(x, y), 0.02);
    }
}

TEST(RankSum, RejectsEmpty) { EXPECT_THROW(wilcoxon_rank_sum({}, {1.0}), std::invalid_argument); }

TEST(SignedRank, SmallestPossibleAtFive)
{
    EXPECT_EQ(wilcoxon_signed_rank({0.1, 0.2, 0.3, 0.4, 0.5}), 0.0625);
    EXPECT_EQ(wilcoxon_signed_rank({-1, -2, -3, -4, -5}), 0.0625);
    EXPECT_EQ(wilcoxon_signed_rank({0, 0}), 1.0);
}

TEST(SignedRank, MatchesSignFlipOracle)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = draw(rng, 1 + trial % 12, trial % 2 ? 7 : 1000);
        for (auto& v : x)
            v -= 0.3;
        EXPECT_NEAR(wilcoxon_signed_rank(x), sign_flip_p(x), 1e-9) << "trial " << trial;
    }
}

TEST(Summary, TukeyHinges)
{
    const auto b = summarize({1, 2, 3, 4, 5});
    EXPECT_EQ(b.median, 3);
    EXPECT_EQ(b.lower_hinge, 2);
    EXPECT_EQ(b.upper_hinge, 4);
    EXPECT_EQ(b.lower_whisker, 1);
    EXPECT_EQ(b.upper_whisker, 5);
    const auto e = summarize({4, 1, 3, 2});
    EXPECT_EQ(e.median, 2.5);
    EXPECT_EQ(e.lower_hinge, 1.5);
    EXPECT_EQ(e.upper_hinge, 3.5);
    const auto o = summarize({1, 2, 3, 4, 100});
    EXPECT_EQ(o.upper_whisker, 4);
    EXPECT_THROW(summarize({}), std::invalid_argument);
}

TEST(Comparison, RatioAndFlag)
{
    const auto row = compare_samples("B", "t_resilience", {0.4, 0.4, 0.4}, "local_search", {0.2, 0.2, 0.2});
    EXPECT_EQ(row.ratio_text(), "2.00");
    EXPECT_DOUBLE_EQ(row.difference, 0.2);
    EXPECT_EQ(row.p_value, 0.1);
    const auto flat = compare_samples("B", "t_resilience", {0.4}, "local_search", {0.0, -0.1, 0.0});
    EXPECT_FALSE(flat.ratio.has_value());
    EXPECT_EQ(flat.ratio_text(), "+++");
}

TEST(Comparison, ReportListsEveryBaseline)
{
    std::map<std::string, std::map<std::string, std::vector<double>>> s;
    s["B"]["t_resilience"] = {0.3, 0.35};
    s["B"]["local_search"] = {0.1, 0.2};
    s["B"]["bongard"] = {0.15, 0.1};
    s["C"]["local_search"] = {0.1};
    const auto rep = build_report(s, "t_resilience");
    EXPECT_EQ(rep.rows.size(), 2u);
    EXPECT_EQ(rep.missing, (std::vector<std::string>{"C/t_resilience"}));
    std::ostringstream csv, text;
    write_report_csv(csv, rep);
    write_report_text(text, rep);
    const std::string lines = csv.str();
    EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 3);
    EXPECT_NE(text.str().find("local_search"), std::string::npos);
}
