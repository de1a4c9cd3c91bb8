#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exdec/matching_decoder.hpp"
#include "exdec/oracle.hpp"
#include "pauli_enum.hpp"

using namespace exdec;

namespace {

std::vector<int> mask_defects(std::uint32_t mask, int m) {
    std::vector<int> out;
    for (int s = 0; s < m; ++s)
        if (mask >> s & 1u) out.push_back(s);
    return out;
}

}  // namespace

TEST(ParityGraph, BoundaryCopyCounts) {
    Code c = build_code(5);
    auto g = build_parity_graph(c, Part::X, {0, 3, 7}, 1);
    EXPECT_EQ(g.num_a, 3);
    EXPECT_EQ(g.num_b, 4);
    EXPECT_EQ(g.num_vertices() % 2, 0);
    auto g0 = build_parity_graph(c, Part::X, {0, 3, 7}, 0);
    EXPECT_EQ(g0.num_a, 4);
    EXPECT_EQ(g0.num_b, 3);
    auto empty = build_parity_graph(c, Part::Z, {}, 0);
    EXPECT_EQ(empty.num_vertices(), 0);
    EXPECT_TRUE(mwpm_exact(empty).mate.empty());
}

TEST(ParityGraph, RejectsMixedSpecies) {
    Code c = build_code(3);
    DefectSet s;
    s.x_part = {0};
    s.z_part = {1};
    EXPECT_THROW(build_parity_graph(c, s, 0), InvalidParameter);
    EXPECT_THROW(build_parity_graph(c, Part::X, {99}, 0), InvalidParameter);
}

TEST(ParityGraph, SingleDefectEvenParityGoesToOtherBoundary) {
    Code c = build_code(3);
    const CheckGraph& g = c.graph(Part::X);
    for (int s = 0; s < g.num_checks; ++s) {
        auto m = mwpm_exact(build_parity_graph(c, Part::X, {s}, 0));
        EXPECT_EQ(m.weight, g.dist(s, g.boundary_b()));
        auto m1 = mwpm_exact(build_parity_graph(c, Part::X, {s}, 1));
        EXPECT_EQ(m1.weight, g.dist(s, g.boundary_a()));
        EXPECT_EQ(g.dist(s, g.boundary_a()) + g.dist(s, g.boundary_b()), 3);
    }
}

TEST(ParityGraph, MatchParityAlwaysAsRequested) {
    Code c = build_code(5);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = c.graph(Part::Z).num_checks;
        auto defects = mask_defects(static_cast<std::uint32_t>(rng()) & ((1u << m) - 1), m);
        if (defects.empty()) continue;
        for (int parity = 0; parity < 2; ++parity) {
            auto g = build_parity_graph(c, Part::Z, defects, parity);
            auto match = mwpm_exact(g);
            int to_a = 0;
            for (int u = 0; u < g.num_bulk(); ++u) to_a += g.is_a(match.mate[static_cast<std::size_t>(u)]) ? 1 : 0;
            EXPECT_EQ(to_a % 2, parity);
        }
    }
}

TEST(ClassWeights, EqualCosetMinimaD3AndD5) {
    for (int d : {3, 5}) {
        Code c = build_code(d);
        for (Part p : kParts) {
            auto minima = coset_minima(c, p);
            for (std::uint32_t mask = 0; mask < minima.size(); ++mask) {
                auto w = class_weights(c, p, mask_defects(mask, c.graph(p).num_checks));
                ASSERT_EQ(w[0], minima[mask][0]) << "d=" << d << " mask=" << mask;
                ASSERT_EQ(w[1], minima[mask][1]) << "d=" << d << " mask=" << mask;
            }
        }
    }
}

TEST(SectorCorrection, Examples) {
    Code c = build_code(3);
    auto trivial = min_weight_in_sector(c, Part::X, {}, 0);
    EXPECT_EQ(trivial.weight, 0);
    auto flipped = min_weight_in_sector(c, Part::X, {}, 1);
    EXPECT_EQ(flipped.weight, 3);
    EXPECT_EQ(class_parity(c, Part::X, flipped.bits), 1);
    EXPECT_TRUE(bits_to_indices(check_bits(c, Part::X, flipped.bits)).empty());

    PauliError e(9);
    e.set(c.qubit(1, 1), Pauli::X);
    auto defects = syndrome(c, e).x_part;
    EXPECT_EQ(min_weight_in_sector(c, Part::X, defects, 0).weight, 1);
    EXPECT_EQ(min_weight_in_sector(c, Part::X, defects, 1).weight, 2);
}

TEST(SectorCorrection, ValidAndOptimalOnRandomSyndromes) {
    for (int d : {3, 5, 7}) {
        Code c = build_code(d);
        std::mt19937_64 rng(static_cast<std::uint64_t>(d));
        for (int trial = 0; trial < 150; ++trial) {
            for (Part p : kParts) {
                const int m = c.graph(p).num_checks;
                std::vector<int> defects;
                for (int s = 0; s < m; ++s)
                    if (rng() % 4 == 0) defects.push_back(s);
                auto w = class_weights(c, p, defects);
                for (int cls = 0; cls < 2; ++cls) {
                    auto corr = min_weight_in_sector(c, p, defects, cls);
                    EXPECT_EQ(bits_to_indices(check_bits(c, p, corr.bits)), defects);
                    EXPECT_EQ(class_parity(c, p, corr.bits), cls);
                    EXPECT_EQ(corr.weight, w[static_cast<std::size_t>(cls)]);
                }
            }
        }
    }
}

TEST(DecodeExclusive, EmptySyndromeAccepts) {
    Code c = build_code(5);
    for (double cc : {0.0, 0.5, 1.0}) {
        auto out = decode_exclusive(c, DefectSet{}, DecoderConfig{cc});
        EXPECT_TRUE(out.accepted());
        EXPECT_TRUE(out.correction.is_identity());
        for (const auto& s : out.species) EXPECT_EQ(s.delta, 5);
    }
}

TEST(DecodeExclusive, GapRuleExamples) {
    Code c = build_code(3);
    PauliError e(9);
    e.set(c.qubit(1, 1), Pauli::Z);
    DefectSet s = syndrome(c, e);
    auto half = decode_exclusive(c, s, DecoderConfig{0.5});
    EXPECT_TRUE(half.aborted);
    EXPECT_EQ(half.species[static_cast<int>(Part::Z)].delta, 1);
    auto full = decode_exclusive(c, s, DecoderConfig{1.0});
    ASSERT_TRUE(full.accepted());
    EXPECT_EQ(full.correction.weight(), 1);
    EXPECT_EQ(full.residual_sector(c, e), Sector::I);
    EXPECT_EQ(syndrome(c, full.correction), s);
    EXPECT_THROW(decode_exclusive(c, s, DecoderConfig{1.5}), InvalidParameter);
}

TEST(DecodeExclusive, BoundaryToleranceDecidedExactly) {
    // 1 - delta/d == c must not abort.
    EXPECT_FALSE(gap_aborts(3, 1, 2.0 / 3.0));
    EXPECT_TRUE(gap_aborts(3, 0, 2.0 / 3.0));
    EXPECT_FALSE(gap_aborts(5, 3, 0.4));
    EXPECT_TRUE(gap_aborts(5, 2, 0.4));
    EXPECT_FALSE(gap_aborts(5, 0, 1.0));
}

TEST(DecodeExclusive, CorrectionValidityOnRandomErrors) {
    for (int d : {3, 5, 7}) {
        Code c = build_code(d);
        MatchingDecoder dec(c);
        Rng rng(42, static_cast<std::uint64_t>(d));
        for (int shot = 0; shot < 300; ++shot) {
            PauliError e = sample_error(c, NoiseParams::code_capacity(0.15), rng);
            DefectSet s = syndrome(c, e);
            auto out = dec.decode(s, DecoderConfig{1.0});
            ASSERT_TRUE(out.accepted());
            EXPECT_EQ(syndrome(c, out.correction), s);
            auto fast = dec.evaluate(e, DecoderConfig{1.0});
            EXPECT_FALSE(fast.aborted);
            EXPECT_EQ(fast.residual, logical_sector(c, e * out.correction));
            for (double cc : {0.0, 0.4, 0.5, 2.0 / 3.0}) {
                auto o = dec.decode(s, DecoderConfig{cc});
                auto f = dec.evaluate(e, DecoderConfig{cc});
                EXPECT_EQ(o.aborted, f.aborted);
                if (!o.aborted) {
                    EXPECT_EQ(f.residual, o.residual_sector(c, e));
                }
            }
        }
    }
}

TEST(DecodeExclusive, TableAgreesWithDirectMatching) {
    Code c = build_code(5);
    MatchingDecoder tab(c, true), direct(c, false);
    EXPECT_TRUE(tab.tabulated(Part::X));
    EXPECT_FALSE(direct.tabulated(Part::X));
    Rng rng(7);
    for (int shot = 0; shot < 500; ++shot) {
        PauliError e = sample_error(c, NoiseParams::code_capacity(0.2), rng);
        for (Part p : kParts) {
            auto defects = syndrome(c, e).of(p);
            EXPECT_EQ(tab.weights(p, defects), direct.weights(p, defects));
        }
    }
}

TEST(DecodeExclusive, AbortOrCorrectBelowGuaranteedWeight) {
    for (int d : {3, 5}) {
        Code c = build_code(d);
        MatchingDecoder dec(c);
        for (double cc : {0.0, 0.5, 1.0}) {
            const double bound = d * (1.0 - cc / 2.0);
            const int wmax = static_cast<int>(std::ceil(bound)) - 1;
            long silent = 0;
            exdec::testing::for_each_low_weight(c.num_qubits(), wmax, [&](const PauliError& e, int) {
                auto v = dec.evaluate(e, DecoderConfig{cc});
                if (!v.aborted && v.residual != Sector::I) ++silent;
            });
            EXPECT_EQ(silent, 0) << "d=" << d << " c=" << cc;
        }
    }
}

TEST(DecodeExclusive, NoAbortAtOrBelowHalfCD) {
    for (int d : {3, 5}) {
        Code c = build_code(d);
        MatchingDecoder dec(c);
        for (double cc : {0.0, 0.5, 1.0}) {
            const int wmax = static_cast<int>(std::floor(cc * d / 2.0));
            long aborts = 0;
            exdec::testing::for_each_low_weight(c.num_qubits(), wmax, [&](const PauliError& e, int) {
                aborts += dec.evaluate(e, DecoderConfig{cc}).aborted ? 1 : 0;
            });
            EXPECT_EQ(aborts, 0) << "d=" << d << " c=" << cc;
        }
    }
}

TEST(DecodeExclusive, ExtremeTolerances) {
    Code c = build_code(5);
    MatchingDecoder dec(c);
    Rng rng(5);
    for (int shot = 0; shot < 2000; ++shot) {
        PauliError e = sample_error(c, NoiseParams::code_capacity(0.3), rng);
        EXPECT_FALSE(dec.evaluate(e, DecoderConfig{1.0}).aborted);
        EXPECT_EQ(dec.evaluate(e, DecoderConfig{0.0}).aborted, !syndrome(c, e).empty());
    }
}
