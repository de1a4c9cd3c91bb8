#include <gtest/gtest.h>

#include <random>

#include "exdec/unionfind_decoder.hpp"

using namespace exdec;

namespace {

std::vector<std::uint8_t> erasure_of(const Code& c, std::initializer_list<int> qubits) {
    std::vector<std::uint8_t> e(static_cast<std::size_t>(c.num_qubits()), 0);
    for (int q : qubits) e[static_cast<std::size_t>(q)] = 1;
    return e;
}

int line_scan_bound(const Code& c, const std::vector<std::uint8_t>& er) {
    const int d = c.distance();
    int best = d;
    for (int i = 0; i < d; ++i) {
        int row = 0, col = 0;
        for (int j = 0; j < d; ++j) {
            row += er[static_cast<std::size_t>(c.qubit(i, j))] ? 0 : 1;
            col += er[static_cast<std::size_t>(c.qubit(j, i))] ? 0 : 1;
        }
        best = std::min({best, row, col});
    }
    return best;
}

}  // namespace

TEST(SyndromeValidation, EmptyInputs) {
    Code c = build_code(3);
    auto g = syndrome_validation(c, Part::X, erasure_of(c, {}), {});
    EXPECT_TRUE(bits_to_indices(g).empty());
}

TEST(SyndromeValidation, SingleBulkErrorCoversBothDefectChecks) {
    Code c = build_code(3);
    PauliError e(9);
    e.set(c.qubit(1, 1), Pauli::X);
    auto defects = syndrome(c, e).x_part;
    auto g = syndrome_validation(c, Part::X, erasure_of(c, {}), defects);
    std::vector<std::uint8_t> expected(9, 0);
    const CheckGraph& graph = c.graph(Part::X);
    for (int s : defects)
        for (auto [w, q] : graph.adjacency[static_cast<std::size_t>(s)]) {
            (void)w;
            expected[static_cast<std::size_t>(q)] = 1;
        }
    EXPECT_EQ(g, expected);
    EXPECT_TRUE(g[static_cast<std::size_t>(c.qubit(1, 1))]);
}

TEST(SyndromeValidation, HalfGrownEdgesCountTowardErasure) {
    // X on q2 and q7: the two clusters fuse through q4, which carries no error.
    Code c = build_code(3);
    PauliError e(9);
    e.set(2, Pauli::X);
    e.set(7, Pauli::X);
    auto g = syndrome_validation(c, Part::X, erasure_of(c, {}), syndrome(c, e).x_part);
    EXPECT_TRUE(g[2]);
    EXPECT_TRUE(g[7]);
    EXPECT_TRUE(g[4]);
    EXPECT_LT(survived_distance(c, Part::X, g), 2);
    UnionFindDecoder dec(c, false);
    EXPECT_TRUE(dec.evaluate(e, erasure_of(c, {}), DecoderConfig{0.5}).aborted);
}

TEST(SyndromeValidation, ValidErasureUnchanged) {
    Code c = build_code(5);
    // Erase a whole Z stabilizer support: its X-part defects pair up inside.
    const auto& stab = c.z_stabilizers()[5];
    std::vector<std::uint8_t> er(25, 0);
    for (int q : stab) er[static_cast<std::size_t>(q)] = 1;
    PauliError e(25);
    e.set(stab[0], Pauli::X);
    e.set(stab[1], Pauli::X);
    auto grown = syndrome_validation(c, Part::X, er, syndrome(c, e).x_part);
    EXPECT_EQ(grown, er);
    EXPECT_THROW(syndrome_validation(c, Part::X, std::vector<std::uint8_t>(3, 0), {}), InvalidParameter);
}

TEST(SurvivedDistance, Examples) {
    Code c = build_code(5);
    EXPECT_EQ(survived_distance(c, erasure_of(c, {})), 5);
    EXPECT_EQ(survived_distance(c, erasure_of(c, {0, 1, 2, 3, 4})), 0);
    auto two = erasure_of(c, {c.qubit(2, 1), c.qubit(2, 3)});
    EXPECT_EQ(survived_distance(c, two), 3);
    EXPECT_EQ(survived_distance(c, two), line_scan_bound(c, two));
}

TEST(SurvivedDistance, BoundedByLineScanAndMonotone) {
    Code c = build_code(5);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint8_t> er(25, 0);
        int prev = survived_distance(c, er);
        for (int step = 0; step < 8; ++step) {
            er[rng() % 25] = 1;
            int now = survived_distance(c, er);
            EXPECT_LE(now, prev);
            EXPECT_LE(now, line_scan_bound(c, er));
            prev = now;
        }
    }
}

TEST(DecodeUf, Examples) {
    Code c = build_code(3);
    auto none = decode_uf_exclusive(c, {}, DefectSet{}, DecoderConfig{0.0});
    EXPECT_TRUE(none.accepted());
    EXPECT_TRUE(none.correction.is_identity());

    auto row = decode_uf_exclusive(c, erasure_of(c, {0, 1, 2}), DefectSet{}, DecoderConfig{0.9});
    EXPECT_TRUE(row.aborted);

    PauliError e(9);
    e.set(c.qubit(1, 1), Pauli::Y);
    auto out = decode_uf_exclusive(c, {}, syndrome(c, e), DecoderConfig{1.0});
    ASSERT_TRUE(out.accepted());
    EXPECT_EQ(syndrome(c, out.correction), syndrome(c, e));
    EXPECT_EQ(out.residual_sector(c, e), Sector::I);
}

TEST(DecodeUf, CorrectionMatchesSyndrome) {
    for (int d : {3, 5, 7}) {
        Code c = build_code(d);
        Rng rng(4, static_cast<std::uint64_t>(d));
        for (int shot = 0; shot < 300; ++shot) {
            PauliError e = sample_error(c, NoiseParams::code_capacity(0.2), rng);
            std::vector<std::uint8_t> er(static_cast<std::size_t>(c.num_qubits()), 0);
            for (auto& b : er) b = rng.uniform() < 0.1;
            auto out = decode_uf_exclusive(c, er, syndrome(c, e), DecoderConfig{1.0});
            ASSERT_TRUE(out.accepted());
            EXPECT_EQ(syndrome(c, out.correction), syndrome(c, e));
            for (Part p : kParts) {
                auto grown = syndrome_validation(c, p, er, syndrome(c, e).of(p));
                for (int q = 0; q < c.num_qubits(); ++q)
                    if (out.correction.part(p)[static_cast<std::size_t>(q)]) {
                        EXPECT_TRUE(grown[static_cast<std::size_t>(q)]);
                    }
            }
        }
    }
}

TEST(DecodeUf, PureErasureCorrectedWhenNoLogicalErased) {
    for (int d : {3, 5}) {
        Code c = build_code(d);
        Rng rng(12, static_cast<std::uint64_t>(d));
        int checked = 0;
        for (int shot = 0; shot < 3000; ++shot) {
            std::vector<std::uint8_t> er(static_cast<std::size_t>(c.num_qubits()), 0);
            PauliError e(c.num_qubits());
            for (int q = 0; q < c.num_qubits(); ++q) {
                if (rng.uniform() < 0.3) {
                    er[static_cast<std::size_t>(q)] = 1;
                    e.set(q, static_cast<Pauli>(rng.below(4)));
                }
            }
            if (survived_distance(c, er) == 0) continue;
            ++checked;
            auto out = decode_uf_exclusive(c, er, syndrome(c, e), DecoderConfig{1.0});
            ASSERT_TRUE(out.accepted());
            EXPECT_EQ(out.residual_sector(c, e), Sector::I);
        }
        EXPECT_GT(checked, 100);
    }
}

TEST(DecodeUf, TabulatedMatchesDirect) {
    for (int d : {3, 5}) {
        Code c = build_code(d);
        UnionFindDecoder tab(c, true), direct(c, false);
        Rng rng(1, static_cast<std::uint64_t>(d));
        for (int shot = 0; shot < 1000; ++shot) {
            PauliError e = sample_error(c, NoiseParams::code_capacity(0.15), rng);
            for (double cc : {0.0, 0.5, 1.0}) {
                auto a = tab.evaluate(e, DecoderConfig{cc});
                auto b = direct.evaluate(e, DecoderConfig{cc});
                auto full = direct.evaluate(e, std::vector<std::uint8_t>(static_cast<std::size_t>(c.num_qubits()), 0),
                                            DecoderConfig{cc});
                EXPECT_EQ(a.aborted, b.aborted);
                EXPECT_EQ(a.aborted, full.aborted);
                if (!a.aborted) {
                    EXPECT_EQ(a.residual, b.residual);
                    EXPECT_EQ(a.residual, full.residual);
                }
            }
        }
    }
}

TEST(DecodeUf, NoSilentFailureBelowBound) {
    for (int d : {3, 5}) {
        Code c = build_code(d);
        UnionFindDecoder dec(c, false);
        Rng rng(77, static_cast<std::uint64_t>(d));
        for (double cc : {0.0, 0.5}) {
            const double bound = 2.0 * d * (1.0 - cc / 2.0);
            long silent = 0;
            for (int trial = 0; trial < 5000; ++trial) {
                int s = static_cast<int>(rng.below(static_cast<std::uint64_t>(d + 1)));
                int te = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * d + 1)));
                if (2 * s + te >= bound) continue;
                PauliError e(c.num_qubits());
                std::vector<std::uint8_t> er(static_cast<std::size_t>(c.num_qubits()), 0);
                for (int i = 0; i < te; ++i) er[rng.below(static_cast<std::uint64_t>(c.num_qubits()))] = 1;
                for (int i = 0; i < s; ++i)
                    e.set(static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_qubits()))),
                          static_cast<Pauli>(1 + rng.below(3)));
                auto v = dec.evaluate(e, er, DecoderConfig{cc});
                if (!v.aborted && v.residual != Sector::I) ++silent;
            }
            EXPECT_EQ(silent, 0) << "d=" << d << " c=" << cc;
        }
    }
}
