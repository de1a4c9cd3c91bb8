#include <gtest/gtest.h>

#include <cmath>

#include "exdec/matching_decoder.hpp"
#include "exdec/oracle.hpp"
#include "pauli_enum.hpp"

using namespace exdec;

namespace {

double binomial(int n, int k) {
    return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
}

}  // namespace

TEST(ExactTable, CountsCoverEveryError) {
    Code c = build_code(3);
    for (DecoderKind kind : {DecoderKind::Mwpm, DecoderKind::UnionFind}) {
        for (double cc : {0.0, 0.5, 1.0}) {
            auto t = exact_table(c, kind, cc);
            for (int w = 0; w <= 9; ++w) {
                std::uint64_t total = t.abort[static_cast<std::size_t>(w)];
                for (Sector s : kSectors) total += t.accept[static_cast<int>(s)][static_cast<std::size_t>(w)];
                EXPECT_EQ(static_cast<double>(total), binomial(9, w) * std::pow(3.0, w));
            }
            for (double p : {0.01, 0.3, 0.9}) EXPECT_NEAR(t.accept_probability(p) + t.g(p), 1.0, 1e-12);
        }
    }
}

TEST(ExactTable, ZeroNoise) {
    Code c = build_code(3);
    for (double cc : {0.0, 0.5, 1.0}) {
        auto t = exact_table(c, DecoderKind::Mwpm, cc);
        EXPECT_EQ(t.g(0.0), 0.0);
        EXPECT_EQ(t.failure(0.0), 0.0);
    }
}

TEST(ExactTable, SectorsEqualAtThreeQuarters) {
    Code c = build_code(3);
    for (DecoderKind kind : {DecoderKind::Mwpm, DecoderKind::UnionFind}) {
        for (double cc : {0.0, 0.5, 1.0}) {
            auto t = exact_table(c, kind, cc);
            const double pi = t.sector_probability(Sector::I, 0.75);
            for (Sector s : {Sector::X, Sector::Y, Sector::Z}) EXPECT_NEAR(t.sector_probability(s, 0.75), pi, 1e-15);
        }
    }
}

TEST(ExactTable, FrozenFailingCountsD3) {
    Code c = build_code(3);
    // Every c < 2/3 behaves as zero tolerance at d = 3 because the gap is odd.
    const std::vector<std::uint64_t> zero{0, 0, 0, 24, 0, 192, 0, 408, 0, 144};
    const std::vector<std::uint64_t> standard{0, 0, 144, 1576, 7704, 23424, 46656, 58152, 43416, 15536};
    EXPECT_EQ(exact_table(c, DecoderKind::Mwpm, 0.0).failing_counts(), zero);
    EXPECT_EQ(exact_table(c, DecoderKind::Mwpm, 0.5).failing_counts(), zero);
    EXPECT_EQ(exact_table(c, DecoderKind::Mwpm, 2.0 / 3.0).failing_counts(), standard);
    EXPECT_EQ(exact_table(c, DecoderKind::Mwpm, 1.0).failing_counts(), standard);
    const std::vector<std::uint64_t> aborts{0, 27, 320, 2244, 10184, 30426, 61136, 78324, 58920, 19539};
    EXPECT_EQ(exact_table(c, DecoderKind::Mwpm, 0.0).abort, aborts);
}

TEST(ExactTable, ZeroToleranceAbortVersusNaiveFormula) {
    // At c = 0, 1 - (1-p)^9 - g is the probability of a nonidentity error with
    // trivial syndrome. The lightest are the four weight-2 boundary stabilizers.
    Code c = build_code(3);
    auto t = exact_table(c, DecoderKind::Mwpm, 0.0);
    EXPECT_EQ(t.accept[0][2], 4u);
    EXPECT_EQ(t.accept[0][1], 0u);
    for (double p : {1e-2, 1e-3}) {
        const double diff = 1.0 - std::pow(1.0 - p, 9) - t.g(p);
        EXPECT_NEAR(diff / (p * p), 4.0 / 9.0, 0.1);
    }
}

TEST(ExactTable, MwpmOracleMatchesDecoderEnumeration) {
    Code c = build_code(3);
    MatchingDecoder dec(c, false);
    for (double cc : {0.0, 0.4, 0.5, 2.0 / 3.0, 1.0}) {
        DecoderConfig cfg{cc};
        auto direct = enumerate_code_capacity(c, [&](Part p, const std::vector<std::uint8_t>& bits) {
            return dec.part_verdict(p, bits, cfg);
        });
        auto brute = enumerate_code_capacity_mwpm(c, cc);
        EXPECT_EQ(direct.abort, brute.abort) << cc;
        for (int s = 0; s < 4; ++s) EXPECT_EQ(direct.accept[static_cast<std::size_t>(s)], brute.accept[static_cast<std::size_t>(s)]) << cc;
    }
}

TEST(ExactTable, AgreesWithPerErrorEvaluation) {
    Code c = build_code(3);
    UnionFindDecoder uf(c, false);
    auto t = exact_table(c, DecoderKind::UnionFind, 0.5);
    std::vector<std::uint64_t> aborts(10, 0), failing(10, 0);
    exdec::testing::for_each_low_weight(9, 3, [&](const PauliError& e, int w) {
        auto v = uf.evaluate(e, DecoderConfig{0.5});
        if (v.aborted)
            ++aborts[static_cast<std::size_t>(w)];
        else if (v.residual != Sector::I)
            ++failing[static_cast<std::size_t>(w)];
    });
    for (int w = 0; w <= 3; ++w) {
        EXPECT_EQ(t.abort[static_cast<std::size_t>(w)], aborts[static_cast<std::size_t>(w)]);
        EXPECT_EQ(t.failing_counts()[static_cast<std::size_t>(w)], failing[static_cast<std::size_t>(w)]);
    }
}

TEST(ExactTable, RefusesLargeCodes) {
    EXPECT_THROW(exact_table(build_code(5), DecoderKind::Mwpm, 1.0), BudgetExceeded);
    EXPECT_THROW(coset_minima(build_code(7), Part::X), BudgetExceeded);
}

TEST(LowWeightSweep, MinimalWeights) {
    Code c3 = build_code(3);
    Code c5 = build_code(5);
    auto z3 = low_weight_sweep_mwpm(c3, 0.0, 3);
    EXPECT_EQ(z3.min_failing_weight(), 3);
    EXPECT_EQ(z3.min_abort_weight(), 1);
    auto s5 = low_weight_sweep_mwpm(c5, 1.0, 3);
    EXPECT_EQ(s5.min_failing_weight(), 3);
    EXPECT_EQ(s5.min_abort_weight(), -1);
    auto h5 = low_weight_sweep_mwpm(c5, 0.5, 4);
    EXPECT_EQ(h5.min_failing_weight(), 4);
    EXPECT_EQ(h5.min_abort_weight(), 2);
    EXPECT_EQ(h5.failing[4], 5912u);
    EXPECT_EQ(s5.failing[3], 4672u);
    EXPECT_THROW(low_weight_sweep_mwpm(build_code(7), 1.0, 6), BudgetExceeded);
}

TEST(LowWeightSweep, AgreesWithFullTableAtD3) {
    Code c = build_code(3);
    for (double cc : {0.0, 0.5, 1.0}) {
        auto t = exact_table(c, DecoderKind::Mwpm, cc);
        auto lw = low_weight_sweep_mwpm(c, cc, 4);
        auto fc = t.failing_counts();
        for (int w = 0; w <= 4; ++w) {
            EXPECT_EQ(lw.failing[static_cast<std::size_t>(w)], fc[static_cast<std::size_t>(w)]);
            EXPECT_EQ(lw.aborting[static_cast<std::size_t>(w)], t.abort[static_cast<std::size_t>(w)]);
        }
    }
}

TEST(FtEnumeration, CountsD4) {
    auto m = build_spacetime(4);
    auto counts = enumerate_low_weight_ft(m, 4);
    for (int w = 1; w < 4; ++w) EXPECT_EQ(counts.failing(w), 0u) << w;
    EXPECT_EQ(counts.count("II00", 0), 1u);
    for (const char* s : {"XI00", "IX00", "ZI00", "IZ00"}) EXPECT_EQ(counts.count(s, 4), 48u) << s;
    for (const char* s : {"II10", "II01"}) EXPECT_EQ(counts.count(s, 4), 8u) << s;
    for (const char* s : {"XX00", "ZZ00", "XZ00", "ZX00"}) EXPECT_EQ(counts.count(s, 4), 16u) << s;
    EXPECT_EQ(counts.failing(4), 4u * 48 + 2 * 8 + 4 * 16);
}

TEST(FtEnumeration, CountsD2) {
    auto m = build_spacetime(2);
    auto counts = enumerate_low_weight_ft(m, 2);
    EXPECT_EQ(counts.failing(1), 0u);
    EXPECT_EQ(counts.count("XI00", 2), 4u);
    EXPECT_EQ(counts.count("II10", 2), 2u);
    EXPECT_EQ(counts.count("XX00", 2), 4u);
    EXPECT_EQ(counts.count("XZ00", 2), 4u);
    // At d = 2 the Y logical pair also reaches weight d.
    EXPECT_EQ(counts.count("YY00", 2), 4u);
}

TEST(FtEnumeration, RefusesOversizedSearch) {
    EXPECT_THROW(enumerate_low_weight_ft(build_spacetime(8), 8), BudgetExceeded);
}
