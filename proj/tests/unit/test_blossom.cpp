#include <gtest/gtest.h>

#include <bit>
#include <limits>
#include <random>

#include "exdec/blossom.hpp"
#include "exdec/matching_decoder.hpp"

using namespace exdec;

namespace {

constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();

/// Minimum perfect matching weight by DP over vertex subsets.
std::int64_t brute_force_min(int n, const std::vector<WeightedEdge>& edges) {
    std::vector<std::vector<std::int64_t>> w(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), kNone));
    for (const auto& e : edges) {
        auto& a = w[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
        a = std::min(a, e.w);
        w[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = a;
    }
    std::vector<std::int64_t> dp(std::size_t{1} << n, kNone);
    dp[0] = 0;
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        if (std::popcount(m) % 2) continue;
        int i = std::countr_zero(m);
        for (int j = i + 1; j < n; ++j) {
            if (!(m >> j & 1u) || w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == kNone) continue;
            auto rest = dp[m & ~(1u << i) & ~(1u << j)];
            if (rest == kNone) continue;
            dp[m] = std::min(dp[m], rest + w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    }
    return dp[(1u << n) - 1];
}

/// Maximum matching weight (any cardinality) by DP.
std::int64_t brute_force_max(int n, const std::vector<WeightedEdge>& edges) {
    std::vector<std::int64_t> dp(std::size_t{1} << n, 0);
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        int i = std::countr_zero(m);
        std::uint32_t rest = m & ~(1u << i);
        dp[m] = dp[rest];
        for (const auto& e : edges) {
            int other = e.u == i ? e.v : (e.v == i ? e.u : -1);
            if (other < 0 || !(rest >> other & 1u)) continue;
            dp[m] = std::max(dp[m], dp[rest & ~(1u << other)] + e.w);
        }
    }
    return dp[(1u << n) - 1];
}

std::int64_t matching_weight(const std::vector<int>& mate, const std::vector<WeightedEdge>& edges) {
    std::int64_t s = 0;
    std::vector<std::uint8_t> used(mate.size(), 0);
    for (const auto& e : edges) {
        if (mate[static_cast<std::size_t>(e.u)] == e.v && !used[static_cast<std::size_t>(e.u)]) {
            s += e.w;
            used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = 1;
        }
    }
    return s;
}

}  // namespace

TEST(Blossom, SingleEdge) {
    Matching m = mwpm_exact(2, {{0, 1, 5}});
    EXPECT_EQ(m.weight, 5);
    EXPECT_EQ(m.mate[0], 1);
}

TEST(Blossom, FourCycle) {
    std::vector<WeightedEdge> e{{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 0, 4}};
    EXPECT_EQ(mwpm_exact(4, e).weight, 4);
}

TEST(Blossom, InfeasibleInputs) {
    EXPECT_THROW(min_weight_perfect_matching(3, {{0, 1, 1}, {1, 2, 1}}), Infeasible);
    EXPECT_THROW(min_weight_perfect_matching(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}), Infeasible);
    EXPECT_THROW(max_weight_matching(2, {{0, 5, 1}}), InvalidParameter);
    EXPECT_TRUE(min_weight_perfect_matching(0, {}).empty());
}

TEST(Blossom, CompleteGraphK6MatchesEnumeration) {
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<WeightedEdge> e;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) e.push_back({i, j, static_cast<std::int64_t>(g() % 20)});
        Matching m = mwpm_exact(6, e);
        EXPECT_EQ(m.weight, brute_force_min(6, e));
        EXPECT_EQ(matching_weight(m.mate, e), m.weight);
    }
}

TEST(Blossom, RandomSparseGraphsMatchDp) {
    std::mt19937_64 g(17);
    for (int trial = 0; trial < 1500; ++trial) {
        const int n = 2 * (1 + static_cast<int>(g() % 7));
        const double density = 0.2 + 0.8 * static_cast<double>(g() % 100) / 100.0;
        std::vector<WeightedEdge> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (static_cast<double>(g() % 1000) / 1000.0 < density) e.push_back({i, j, static_cast<std::int64_t>(g() % 9)});
        const auto expected = brute_force_min(n, e);
        if (expected == kNone) {
            EXPECT_THROW(min_weight_perfect_matching(n, e), Infeasible);
        } else {
            Matching m = mwpm_exact(n, e);
            EXPECT_EQ(m.weight, expected) << "trial " << trial;
        }
    }
}

TEST(Blossom, MaxWeightAnyCardinalityMatchesDp) {
    std::mt19937_64 g(23);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(g() % 11);
        std::vector<WeightedEdge> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (g() % 3) e.push_back({i, j, static_cast<std::int64_t>(g() % 30)});
        auto mate = max_weight_matching(n, e, false);
        for (int v = 0; v < n; ++v)
            if (mate[static_cast<std::size_t>(v)] >= 0) {
                EXPECT_EQ(mate[static_cast<std::size_t>(mate[static_cast<std::size_t>(v)])], v);
            }
        EXPECT_EQ(matching_weight(mate, e), brute_force_max(n, e)) << "trial " << trial;
    }
}
