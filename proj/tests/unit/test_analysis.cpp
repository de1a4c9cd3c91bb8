#include <gtest/gtest.h>

#include <cmath>

#include "exdec/analysis.hpp"
#include "exdec/oracle.hpp"

using namespace exdec;

TEST(DirectMc, ZeroNoise) {
    Code c = build_code(3);
    auto r = direct_mc(c, make_evaluator(c, DecoderKind::Mwpm, 0.5), NoiseParams::code_capacity(0.0), 5000, 1);
    EXPECT_EQ(r.shots, 5000);
    EXPECT_EQ(r.g().value, 0.0);
    EXPECT_EQ(r.f().value, 0.0);
}

TEST(DirectMc, StandardDecoderNeverAborts) {
    Code c = build_code(5);
    auto r = direct_mc(c, make_evaluator(c, DecoderKind::Mwpm, 1.0), NoiseParams::code_capacity(0.2), 20000, 2);
    EXPECT_EQ(r.aborts, 0);
    EXPECT_GT(r.failures, 0);
}

TEST(DirectMc, PostSelectedIdentities) {
    Code c = build_code(3);
    auto r = direct_mc(c, make_evaluator(c, DecoderKind::UnionFind, 0.5), NoiseParams::code_capacity(0.3), 30000, 3);
    EXPECT_EQ(r.accepts + r.aborts, r.shots);
    EXPECT_DOUBLE_EQ(r.g().value + r.h().value, 1.0);
    EXPECT_LE(r.f().value, 1.0);
    EXPECT_LE(r.failures, r.accepts);
}

TEST(DirectMc, NoAcceptsLeavesFailureUndefined) {
    Code c = build_code(5);
    auto r = direct_mc(c, make_evaluator(c, DecoderKind::Mwpm, 0.0), NoiseParams::code_capacity(0.99), 50, 3);
    EXPECT_FALSE(r.f_defined());
    EXPECT_TRUE(std::isnan(r.f().value));
}

TEST(DirectMc, MatchesOracle) {
    Code c = build_code(3);
    auto table = exact_table(c, DecoderKind::Mwpm, 0.5);
    auto r = direct_mc(c, make_evaluator(c, DecoderKind::Mwpm, 0.5), NoiseParams::code_capacity(0.1), 1000000, 4);
    EXPECT_NEAR(r.g().value, table.g(0.1), 3.0 * r.g().se);
    EXPECT_NEAR(r.f().value, table.failure(0.1), 3.0 * r.f().se);
}

TEST(DirectMc, DeterministicForAnyThreadCount) {
    Code c = build_code(3);
    auto ev = make_evaluator(c, DecoderKind::Mwpm, 1.0);
    auto a = direct_mc(c, ev, NoiseParams::code_capacity(0.2), 20001, 9, 1);
    auto b = direct_mc(c, ev, NoiseParams::code_capacity(0.2), 20001, 9, 4);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.shots, 20001);
    EXPECT_THROW(direct_mc(c, ev, NoiseParams::code_capacity(0.2), 0, 9), InvalidParameter);
}

TEST(DirectMc, ZeroToleranceFtAbortMatchesClosedForm) {
    auto m = build_spacetime(4);
    const double p = 1e-2;
    auto r = direct_mc_zero_tolerance_ft(m, NoiseParams::phenomenological(p), 40000, 5);
    EXPECT_NEAR(r.g().value, ztft_abort(p, 4, 4, 2.0 * p / 3.0), 3.0 * r.g().se);
}

TEST(Ansatz, Exponents) {
    AnsatzParams a;
    a.c = 0.0;
    EXPECT_EQ(eval_ansatz("k", a, 0.1, 3), 1.0);
    a.c = 1.0;
    EXPECT_EQ(eval_ansatz("k", a, 0.1, 3), 0.5);
    EXPECT_EQ(eval_ansatz("ktilde", a, 0.1, 3), 0.5);
}

TEST(Ansatz, FaultTolerantPrefactor) {
    EXPECT_NEAR(ft_prefactor(4), 512.0 / 81.0, 1e-13);
    EXPECT_NEAR(eval_ansatz("A_ft", {}, 0.0, 4), 6.3210, 1e-4);
    EXPECT_NEAR(eval_ansatz("ztft_f", {}, 1e-4, 4), 512.0 / 81.0 * 1e-16, 1e-28);
    EXPECT_THROW(ft_prefactor(3), InvalidParameter);
}

TEST(Ansatz, PrefactorMatchesEnumeratedLeadingOrder) {
    auto counts = enumerate_low_weight_ft(build_spacetime(4), 4);
    EXPECT_NEAR(counts.failing_coefficient(4), ft_prefactor(4), 1e-12);
    for (int w = 1; w < 4; ++w) EXPECT_EQ(counts.failing_coefficient(w), 0.0);
}

TEST(Ansatz, AbortFormulas) {
    const double p = 1e-3;
    const double g = eval_ansatz("ztft_abort", {}, p, 4);
    EXPECT_NEAR(g, 1.0 - std::pow(1 - p, 64) * std::pow(1 - 2 * p / 3, 64), 1e-15);
    EXPECT_NEAR(g, 0.101216, 1e-6);
    EXPECT_NEAR(eval_ansatz("ztft_abort_first_order", {}, p, 4), 64 * (p + 2 * p / 3), 1e-15);
    EXPECT_NEAR(eval_ansatz("zero_tolerance_abort", {}, 0.01, 3), 1 - std::pow(0.99, 9), 1e-15);
    EXPECT_NEAR(eval_ansatz("zero_tolerance_abort_first_order", {}, 0.01, 3), 0.09, 1e-15);
}

TEST(Ansatz, ClosedFormsAndErrors) {
    AnsatzParams a;
    a.c = 0.5;
    a.A = 2.0;
    a.C = 0.5;
    a.At = 3.0;
    a.Ct = 0.1;
    a.lambda_h = 0.9;
    a.C_h = 1.2;
    EXPECT_NEAR(eval_ansatz("f", a, 0.01, 4), 0.5 * std::pow(0.02, 3.0), 1e-18);
    EXPECT_NEAR(eval_ansatz("g", a, 0.01, 4), 0.1 * 0.01 * std::pow(0.03, 1.0), 1e-18);
    EXPECT_NEAR(eval_ansatz("h", a, 0.3, 3), 1.2 * std::pow(0.9, 9), 1e-15);
    EXPECT_THROW(eval_ansatz("nope", a, 0.1, 3), InvalidParameter);
    EXPECT_THROW(eval_ansatz("f", AnsatzParams{}, 0.1, 3), InvalidParameter);
}

TEST(Fits, CriticalExponentRecoversSyntheticThreshold) {
    const double p_th = 0.15, nu = -0.8, A = 1.5, B = 2.0, C = 0.12;
    Rng rng(42);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<DataPoint> pts;
    for (int d : {5, 7, 9})
        for (double p : {0.12, 0.13, 0.14, 0.15, 0.16, 0.17, 0.18}) {
            const double x = (p - p_th) * std::pow(d, -nu);
            const double v = A * x * x + B * x + C;
            const double se = 0.01 * v;
            pts.push_back({d, p, v + se * noise(rng.engine()), se});
        }
    auto fit = fit_critical_exponent(pts);
    EXPECT_FALSE(fit.degenerate);
    EXPECT_GT(fit.p_th_se(), 0.0);
    EXPECT_NEAR(fit.p_th, p_th, 2.0 * fit.p_th_se());
    EXPECT_NEAR(fit.nu, nu, 3.0 * fit.nu_se());
}

TEST(Fits, CriticalExponentPreconditionsAndDegenerateFlag) {
    std::vector<DataPoint> two_d;
    for (int d : {5, 7})
        for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) two_d.push_back({d, p, p, 0.01});
    EXPECT_THROW(fit_critical_exponent(two_d), InvalidParameter);
    std::vector<DataPoint> parallel;
    for (int d : {5, 7, 9})
        for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) parallel.push_back({d, p, p + 0.1 * d, 0.01});
    EXPECT_TRUE(fit_critical_exponent(parallel).degenerate);
}

TEST(Fits, FewEventPointsAreExcluded) {
    std::vector<DataPoint> pts;
    for (int d : {5, 7, 9})
        for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            const double x = (p - 0.3) * d;
            pts.push_back({d, p, 0.5 + 0.4 * x, 0.01, 1000});
        }
    pts.push_back({9, 0.05, 0.9, 0.01, 3});
    auto fit = fit_critical_exponent(pts);
    EXPECT_EQ(fit.warnings.size(), 1u);
    EXPECT_NEAR(fit.p_th, 0.3, 1e-6);
}

TEST(Fits, DecayRecoversExactExponent) {
    std::vector<DataPoint> pts;
    for (double p : {1e-3, 3e-3, 1e-2, 3e-2})
        for (int d : {3, 5, 7, 9}) pts.push_back({d, p, 0.5 * std::pow(2 * p, 0.75 * d), 0.0});
    auto fits = fit_decay(pts, Abscissa::Distance);
    ASSERT_EQ(fits.per_p.size(), 4u);
    for (const auto& f : fits.per_p) {
        EXPECT_NEAR(f.offset(), 0.5, 1e-12);
        EXPECT_NEAR(f.r2, 1.0, 1e-12);
    }
    auto k = fit_exponent(fits.per_p);
    EXPECT_NEAR(k.k, 0.75, 1e-12);
    EXPECT_NEAR(k.A, 2.0, 1e-10);
}

TEST(Fits, DecayDropsNonpositiveValues) {
    std::vector<DataPoint> pts{{3, 0.1, 0.1, 0.01}, {5, 0.1, 0.0, 0.0}, {7, 0.1, 0.01, 0.001}, {9, 0.1, 0.001, 0.0001}};
    auto fits = fit_decay(pts, Abscissa::Qubits);
    EXPECT_EQ(fits.warnings.size(), 1u);
    ASSERT_EQ(fits.per_p.size(), 1u);
    EXPECT_EQ(fits.per_p[0].points, 3);
}

TEST(Fits, ZeroToleranceOracleSlopeGivesUnitExponent) {
    auto table = exact_table(build_code(3), DecoderKind::Mwpm, 0.0);
    std::vector<double> x, y;
    for (double p = 1e-3; p <= 1e-2 * 1.0001; p *= std::pow(10.0, 0.125)) {
        x.push_back(std::log(p));
        y.push_back(std::log(table.failure(p)));
    }
    auto line = fit_line(x, y);
    EXPECT_NEAR(line.slope / 3.0, 1.0, 0.05);
}
